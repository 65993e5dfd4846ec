"""The four rungs of the equivalence ladder, one pair per rung.

Two unbounded sets are compared through eps(t): the worst distance from
either sphere slice of radius t to the other set. Bounded eps certifies
equivalence, a geometric family with eps(t) >= c*t refutes it, and when
neither argument closes the gap the verdict honestly degrades to numeric
evidence or to "inconclusive".
"""

from fractions import Fraction as F

from farfield import (
    FullLine,
    GeometricPoints,
    Lattice,
    PeriodicBlocks,
    Ray,
    check_eps_net,
    decide_strong_equivalence,
    epsilon_curve,
    epsilon_t,
)


def banner(text):
    print(text)
    print("-" * len(text))


def main():
    line = FullLine()
    lattice = Lattice(F(1), F(0))
    gp = GeometricPoints(F(2), F(1), 0)
    ray = Ray(F(0), 1)

    banner("rung 1: certified, line vs unit lattice")
    v = decide_strong_equivalence(line, lattice)
    print(f"status {v.status}, covering bound {v.bound}")
    print(f"eps-net check at 1/2: {check_eps_net(line, lattice, F(1, 2)).status}")
    print()

    banner("rung 2: refuted, powers of two vs half line")
    v = decide_strong_equivalence(gp, ray)
    w = v.witness
    print(f"status {v.status}")
    print(f"witness family t_m = {w.coef} * {w.q}^m with eps(t) >= {w.c} * t")
    for t in w.t_values:
        pair = epsilon_t(gp, ray, F(0), t)
        print(f"  t = {t}: eps = {max(pair)} (ratio {max(pair) / t})")
    print()

    banner("rung 3: numeric decay only, powers of two vs periodic blocks")
    blocks = PeriodicBlocks(F(2), ((F(0), F(1)),))
    v = decide_strong_equivalence(gp, blocks)
    print(f"status {v.status}: {v.note}")
    curve = epsilon_curve(gp, blocks, None, [F(2) ** k for k in range(1, 7)])
    for t, _, _, eps, ratio in curve.samples:
        print(f"  t = {t}: eps = {eps}, eps/t = {ratio}")
    print()

    banner("rung 4: inconclusive, base 3 points vs base 2 points")
    v = decide_strong_equivalence(GeometricPoints(F(3), F(1), 0), gp)
    print(f"status {v.status}, worst tail ratio about {float(v.max_ratio):.3f}")
    print("neither a covering bound nor a surviving witness family exists")


if __name__ == "__main__":
    main()
