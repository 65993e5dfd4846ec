"""From symbolic sequences to a finite metric space and back.

A family of sequences x_n = coef * r_n + lower order terms is pushed
through the whole pipeline: rescaled limits, the stability graph, the
maximal mutually stable families, the finite pretangent space they carry,
and what happens to every limit under subsequence index maps.
"""

from fractions import Fraction as F

import farfield.seqlab as sl


def main():
    scaling = sl.GeometricScaling(F(2), F(1))  # r_n = 2^n
    family = [
        ("x0", sl.ClosedFormSpec({})),                      # the base point
        ("xh", sl.ClosedFormSpec({"r": F(1, 2)})),
        ("x1", sl.ClosedFormSpec({"r": F(1), "sqrt_r": F(3)})),
        ("x2", sl.ClosedFormSpec({"r": F(2)})),
        ("alt", sl.ClosedFormSpec({"alt_r": F(1)})),        # sign flips
    ]

    graph = sl.stability_graph(family, scaling)
    print("rescaled limits d~:")
    for label, value in zip(graph.labels, graph.tilde):
        print(f"  {label}: {value}")
    print()

    cliques = sl.maximal_self_stable(graph)
    print(f"maximal mutually stable families: {cliques}")
    print("(the alternating member is stable against x0 but not against")
    print("the positive-coefficient members, so it forms its own family)")
    print()

    report = sl.pretangent_space(graph, cliques[0])
    space = report.space.space
    print(f"pretangent space on {space.labels}, distinguished point "
          f"{report.distinguished}:")
    for label, row in zip(space.labels, space.dist):
        print(f"  {label}: {[str(v) for v in row]}")
    print()

    print("subsequence pushes (stride, offset) and one tracked limit:")
    for stride, offset in ((2, 0), (2, 1), (3, 1)):
        push = sl.subsequence_push(family, scaling, stride, offset)
        check = next(c for c in push.checks
                     if c[0] == "d_r" and c[1] == ("x0", "alt"))
        _, _, before, after = check
        print(f"  ({stride},{offset}): d_r(x0, alt) "
              f"{before.status}/{before.value} -> "
              f"{after.status}/{after.value}")
    print("even strides fold the alternation into a fixed sign;")
    print("odd strides keep it alternating, and the limit stays put")
    print()

    # can re-indexing merge the alternating member into the big family?
    outcomes = sl.tangency_probe(graph, cliques[1], ((2, 0), (2, 1)),
                                 [("alt", family[4][1])])
    print("tangency probe with the alternating candidate:")
    for out in outcomes:
        mark = f", adjoins {out.witness!r}" if out.witness else ""
        print(f"  index map ({out.stride},{out.offset}): {out.status}{mark}")


if __name__ == "__main__":
    main()
