"""Distance spectra under two scalings of the same porous set.

For the blocks [4^n, 2*4^n] the rescaled picture depends on which
subsequence of radii you ride: windows around t = 3/4 keep landing in the
doubling gaps under r_n = 4^(n+1) but inside the blocks under r_n = 2*4^n.
A bounded-gap set shows no such split anywhere on the same grid.
"""

from fractions import Fraction as F

from farfield import GeometricBlocks, Lattice, compare_spectra, window_hits
from farfield.seqlab import GeometricScaling


def main():
    blocks = GeometricBlocks(F(4), F(1), F(2))
    fast = GeometricScaling(F(4), F(4))    # 4, 16, 64, ...
    slow = GeometricScaling(F(4), F(2))    # 2, 8, 32, ...

    print("window pullbacks for t = 3/4, eps = 1/25, first 8 radii")
    for name, scaling in (("r_n = 4^(n+1)", fast), ("r_n = 2*4^n", slow)):
        hits = window_hits(blocks, F(0), F(3, 4), F(1, 25), scaling, 8)
        print(f"  {name}: hit indices {list(hits) or 'none'}")
    print()

    comp = compare_spectra(blocks, F(0), fast, slow,
                           [F(1, 2), F(3, 4), F(3, 2)], F(1, 100), 50, 10)
    print("comparison rows (t, status under fast, status under slow):")
    for t, s1, s2, first in comp.rows:
        mark = f", diverges at index {first}" if first is not None else ""
        print(f"  t = {t}: {s1} vs {s2}{mark}")
    print(f"differing points: {[str(t) for t in comp.differing_t]}")
    print()

    lattice = Lattice(F(1), F(0))
    grid = [F(k, 8) for k in range(33)]
    comp = compare_spectra(lattice, F(0), fast, slow, grid, F(1, 100), 50, 10)
    print(f"unit lattice over a 33 point grid: differing = {list(comp.differing_t)}")
    print("bounded gaps leave nothing for the scaling choice to see")


if __name__ == "__main__":
    main()
