"""How sparse does a set look from far away?

Walks four one-sided sets through the porosity machinery: two where the
largest relative gap keeps up with the horizon (the value is positive and
exact), two where gaps stay bounded so the value is exactly zero, and one
union with no closed form where only the horizon estimator speaks.
"""

from fractions import Fraction as F

from farfield import (
    FiniteUnion,
    GeometricBlocks,
    GeometricPoints,
    Lattice,
    Ray,
)
from farfield.porosity import (
    horizon_estimate,
    is_porous_at_infinity,
    porosity_at_infinity,
)


def show(name, model):
    exact = porosity_at_infinity(model)
    est = horizon_estimate(model)
    verdict = is_porous_at_infinity(model)
    print(f"{name}")
    print(f"  exact value    {exact.value}  ({exact.kind}; {exact.notes})")
    print(f"  estimator      {est.value}  over {len(est.trace)} probed horizons")
    print(f"  verdict        {verdict.status}")
    if verdict.witness_h is not None:
        print(f"  witness        gap ratio {verdict.witness_ratio} at h = {verdict.witness_h}")
    print()


def main():
    show("powers of two {2^n}", GeometricPoints(F(2), F(1), 0))
    show("blocks [4^n, 2*4^n]", GeometricBlocks(F(4), F(1), F(2)))
    show("half lattice {0,1,2,...}", Lattice(F(1), F(0), half="plus"))
    show("half line [0, inf)", Ray(F(0), 1))

    # no closed form: two interleaved geometric point sets
    union = FiniteUnion((GeometricPoints(F(2), F(1), 0),
                         GeometricPoints(F(2), F(4, 3), 0)))
    est = horizon_estimate(union)
    print("union {2^n} + {(4/3)2^n}: estimator only")
    print(f"  probed sup     {est.value}")
    print(f"  largest probe  h = {max(h for h, _, _ in est.trace)}")
    print("  the interleaving caps every relative gap strictly below 1/2")


if __name__ == "__main__":
    main()
