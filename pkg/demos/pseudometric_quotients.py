"""Zero distances, quotients, and maps that only look different.

A pseudometric lets distinct labels sit at distance zero. Collapsing the
zero classes yields a genuine metric space, and "pseudoisometry" between
two pseudometric spaces is exactly isometry between their quotients. The
demo builds a disguised copy of a space and watches both searches agree.
"""

import random
from fractions import Fraction as F

from farfield import (
    exists_isometry,
    exists_pseudoisometry,
    make_space,
    metric_identify,
    validate_pseudometric,
)


def main():
    labels = ("a", "b", "c", "d")
    dist = (
        (F(0), F(0), F(1), F(1)),
        (F(0), F(0), F(1), F(1)),
        (F(1), F(1), F(0), F(2)),
        (F(1), F(1), F(2), F(0)),
    )
    report = validate_pseudometric(labels, dist)
    print(f"table valid: {report.ok}")

    space = make_space(labels, dist)
    quotient = metric_identify(space)
    print(f"zero classes: {quotient.blocks}")
    q = quotient.space
    print(f"quotient on {q.labels}:")
    for label, row in zip(q.labels, q.dist):
        print(f"  {label}: {[str(v) for v in row]}")
    print()

    # a disguised copy: renamed labels, shuffled order, extra zero twin
    twin_labels = ("u", "v", "w", "x", "y")
    twin_dist = (
        (F(0), F(2), F(1), F(1), F(1)),
        (F(2), F(0), F(1), F(1), F(1)),
        (F(1), F(1), F(0), F(0), F(0)),
        (F(1), F(1), F(0), F(0), F(0)),
        (F(1), F(1), F(0), F(0), F(0)),
    )
    twin = make_space(twin_labels, twin_dist)
    witness = exists_pseudoisometry(space, twin)
    print(f"pseudoisometry found: {witness}")
    same = exists_isometry(metric_identify(space).space,
                           metric_identify(twin).space)
    print(f"quotient isometry found: {same}")
    print()

    # break the triangle inequality and watch validation name the spot
    bad = ((F(0), F(1), F(5)),
           (F(1), F(0), F(1)),
           (F(5), F(1), F(0)))
    report = validate_pseudometric(("p", "q", "r"), bad)
    print(f"broken table valid: {report.ok}")
    for line in report.violations:
        print(f"  {line}")


if __name__ == "__main__":
    main()
