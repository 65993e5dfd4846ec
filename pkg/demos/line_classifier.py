"""Is it a line, a half line, or neither at some scale?

Subsets of the line are compared through their complements: the multiset
of gap lengths in a window, plus removed points that leave no length
trace. Isometries are slope +1 or -1 affine maps, so alignment of the
complement features decides everything.
"""

from fractions import Fraction as F

from farfield import (
    FiniteModification,
    FiniteUnion,
    FullLine,
    GeometricBlocks,
    Lattice,
    Ray,
    classify_line_subspace,
    complement_components,
    line_isometry_test,
    scaling_self_similarity,
)


def main():
    print("complement of the unit lattice in [-5, 5]:")
    rep = complement_components(Lattice(F(1), F(0)), F(5))
    print(f"  {len(rep.bounded)} gaps, all of length "
          f"{set(rep.length_multiset)}")
    print()

    print("isometry tests:")
    pairs = [
        ("[5,inf) vs (-inf,-7]", Ray(F(5), 1), Ray(F(-7), -1)),
        ("Z vs Z + 1/3", Lattice(F(1), F(0)), Lattice(F(1), F(1, 3))),
        ("Z vs 2Z", Lattice(F(1), F(0)), Lattice(F(2), F(0))),
        ("line minus {0,1} vs minus {0,2}",
         FiniteModification(FullLine(), added=(), removed=(F(0), F(1))),
         FiniteModification(FullLine(), added=(), removed=(F(0), F(2)))),
    ]
    for name, a, b in pairs:
        got = line_isometry_test(a, b)
        if got.is_isometric:
            print(f"  {name}: isometric via t -> {got.eps}*t + {got.shift}")
        else:
            print(f"  {name}: not isometric ({got.statistic}, "
                  f"witness {got.witness})")
    print()

    print("self-similarity of the blocks [4^n, 2*4^n]:")
    blocks = GeometricBlocks(F(4), F(1), F(2))
    for k in (F(4), F(16), F(2)):
        got = scaling_self_similarity(blocks, k)
        extra = f", witness length {got.witness}" if got.witness else ""
        print(f"  k = {k}: {got.status}{extra}")
    print()

    print("classification:")
    cases = [
        ("half line [5, inf)", Ray(F(5), 1)),
        ("the whole line", FullLine()),
        ("line minus (0,1)", FiniteUnion((Ray(F(0), -1), Ray(F(1), 1)))),
        ("line minus one point",
         FiniteModification(FullLine(), added=(), removed=(F(3),))),
    ]
    for name, model in cases:
        got = classify_line_subspace(model)
        detail = ""
        if got.status == "fails_condition_with":
            detail = f" (k = {got.k}, witness length {got.witness})"
        elif got.note:
            detail = f" ({got.note})"
        print(f"  {name}: {got.status}{detail}")


if __name__ == "__main__":
    main()
