"""Porosity of a set at infinity.

For E inside [0, inf) the quantity is the limsup over h -> infinity of
l(h)/h, where l(h) is the longest open interval in [0, h] \\ E. Structured
variants get exact closed forms:

* bounded-gap models (rays from a finite origin, half lattices, periodic
  block patterns, and their finite modifications / unions containing one)
  have l(h) bounded, so the value is exactly 0;
* GeometricPoints(q, c, n0) peaks at h = c*q**n with ratio 1 - 1/q;
* GeometricBlocks(q, a, b) peaks at h = a*q**(n+1) with ratio 1 - b/(a*q);
* a finite modification never moves the value (only finitely many gaps
  change).

Everything else gets a finite-horizon estimator: the exact sup of l(h)/h
over a geometric h-grid (quarter-dyadic rational stand-ins) with the
structurally critical horizons injected. The estimator reports the probed
sup only; it never certifies nonporosity, and it is meaningful as a limsup
proxy once the horizon dwarfs the model's structural scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError
from .rationals import rat
from . import setmodels as sm

DEFAULT_HORIZON_EXPONENT = 240  # quarter powers of 2: h up to 2**60
GRID_FLOOR_EXPONENT = 160       # fixed lower edge 2**40 keeps monotonicity
_QUARTER_FACTORS = (Fraction(1), Fraction(119, 100),
                    Fraction(141, 100), Fraction(168, 100))


@dataclass(frozen=True)
class PorosityResult:
    value: Fraction
    kind: str  # exact | horizon_estimate
    witness_h: tuple
    trace: tuple  # rows (h, gap_length, ratio), exact rationals
    notes: str = ""


@dataclass(frozen=True)
class PorosityVerdict:
    status: str  # porous | nonporous_certified | inconclusive_at_horizon
    witness_h: object = None
    witness_ratio: object = None
    result: PorosityResult = None


def _exact_closed_form(model):
    """(value, witness_h builder, note) for variants with a closed form."""
    bound = sm.gap_bound(model)
    if bound is not None:
        return Fraction(0), (), f"all gaps bounded by {bound}"
    if isinstance(model, sm.GeometricPoints):
        value = 1 - 1 / model.q
        return value, ("points",), "largest relative gap between consecutive points"
    if isinstance(model, sm.GeometricBlocks):
        value = model.gap_seed / (model.a * model.q)
        return value, ("blocks",), "largest relative gap before the next block"
    if isinstance(model, sm.FiniteModification):
        inner = _exact_closed_form(model.base)
        if inner is not None:
            value, wk, note = inner
            return value, wk, note + "; finite modification does not move the limsup"
    return None


def _grid(model, horizon_exponent: int):
    j_lo = min(GRID_FLOOR_EXPONENT, horizon_exponent)
    hs = set()
    for j in range(j_lo, horizon_exponent + 1):
        hs.add(Fraction(2) ** (j // 4) * _QUARTER_FACTORS[j % 4])
    h_max = max(hs)
    h_min = min(hs)
    hs.update(sm.critical_gap_h_values(model, h_min, h_max))
    return sorted(hs)


def _probe(model, horizon_exponent: int):
    if horizon_exponent < 4:
        raise InputError("horizon exponent too small")
    if not sm.is_nonnegative_model(model):
        raise InputError("porosity needs a model inside [0, inf)")
    trace = []
    best = Fraction(0)
    witness = []
    for h in _grid(model, horizon_exponent):
        gap = sm.longest_gap(model, h)
        ratio = gap / h
        trace.append((h, gap, ratio))
        if ratio > best:
            best = ratio
            witness = [h]
        elif ratio == best and len(witness) < 8:
            witness.append(h)
    return best, tuple(witness), tuple(trace)


def horizon_estimate(model, horizon_exponent: int = DEFAULT_HORIZON_EXPONENT) -> PorosityResult:
    """Probed sup of l(h)/h over the h-grid, always reported as an estimate."""
    best, witness, trace = _probe(model, horizon_exponent)
    return PorosityResult(best, "horizon_estimate", witness, trace,
                          "probed sup; lower evidence for the limsup")


def porosity_at_infinity(model, horizon_exponent: int = DEFAULT_HORIZON_EXPONENT) -> PorosityResult:
    """Exact value when the variant has a closed form, else the probed sup."""
    closed = _exact_closed_form(model) if sm.is_nonnegative_model(model) else None
    best, witness, trace = _probe(model, horizon_exponent)
    if closed is not None:
        value, _, note = closed
        return PorosityResult(value, "exact", witness, trace, note)
    return PorosityResult(best, "horizon_estimate", witness, trace,
                          "probed sup; lower evidence for the limsup")


def is_porous_at_infinity(model, threshold=Fraction(1, 100),
                          horizon_exponent: int = DEFAULT_HORIZON_EXPONENT) -> PorosityVerdict:
    """Porous needs a concrete witness ratio; nonporosity needs a gap-bound
    certificate. Numeric evidence alone never claims porosity zero."""
    threshold = rat(threshold)
    result = porosity_at_infinity(model, horizon_exponent)
    if result.kind == "exact":
        if result.value == 0:
            return PorosityVerdict("nonporous_certified", result=result)
        h, gap, ratio = max(result.trace, key=lambda row: (row[2], row[0]))
        return PorosityVerdict("porous", witness_h=h, witness_ratio=ratio,
                               result=result)
    hits = [(h, r) for h, _, r in result.trace if r >= threshold]
    if hits:
        h, ratio = max(hits, key=lambda x: x[1])
        return PorosityVerdict("porous", witness_h=h, witness_ratio=ratio,
                               result=result)
    return PorosityVerdict("inconclusive_at_horizon", result=result)
