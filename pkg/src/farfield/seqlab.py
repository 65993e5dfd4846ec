"""Rescaled-limit laboratory for sequences drifting to infinity.

Everything here is organized around one normal form.  A point sequence is
described symbolically, and every supported description reduces to

    x_n = phase(n) * r_n + sub(n)

where phase(n) takes one value on even n and one on odd n (both exact
rationals) and sub(n) is negligible next to r_n.  All the rescaled
quantities (the normalized distance to the basepoint, pairwise rescaled
limits, the limsup form) are then functions of the two phase values alone,
so they come out exact.  Sequences that do not reduce this way (set-valued
selectors over sets we cannot certify) fall back to a numeric probe and are
reported as estimates, never silently mixed with exact results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import (
    GraphConstructionError,
    InputError,
    InternalInvariantError,
)
from .pseudometric import make_space, metric_identify
from .rationals import flog, fmt, ipow_floor_log, rat
from . import setmodels
from .setmodels import (
    asymptotic_covering_bound,
    max_element,
    min_element,
    model_from_dict,
    model_to_dict,
    nearest_point,
)

ZERO = Fraction(0)

MAX_GRAPH_VERTICES = 20

# Atoms a closed-form sequence may combine.  Each is a function of r_n and
# the parity sign (-1)^n only, which is what keeps subsequence pushes exact.
ATOMS = ("r", "alt_r", "sqrt_r", "alt_sqrt_r", "log_r", "alt_log_r",
         "one", "alt_one")

_PHASE_ATOMS = {"r": (1, 1), "alt_r": (1, -1)}  # (even sign, odd sign)


# ---------------------------------------------------------------------------
# Scaling sequences


@dataclass(frozen=True)
class GeometricScaling:
    """r_n = c * q**n with q > 1, c > 0."""

    q: Fraction
    c: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "q", rat(self.q))
        object.__setattr__(self, "c", rat(self.c))
        if self.q <= 1:
            raise InputError("geometric scaling needs ratio q > 1")
        if self.c <= 0:
            raise InputError("geometric scaling needs c > 0")

    def eval(self, n: int) -> Fraction:
        _check_index(n)
        return self.c * self.q ** n


@dataclass(frozen=True)
class PolynomialScaling:
    """r_n = c * n**degree with integer degree >= 1, c > 0."""

    degree: int
    c: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "c", rat(self.c))
        if not isinstance(self.degree, int) or self.degree < 1:
            raise InputError("polynomial scaling needs integer degree >= 1")
        if self.c <= 0:
            raise InputError("polynomial scaling needs c > 0")

    def eval(self, n: int) -> Fraction:
        _check_index(n)
        return self.c * Fraction(n) ** self.degree


@dataclass(frozen=True)
class InterleaveScaling:
    """Alternates two divergent scalings: odd n from `first`, even from
    `second`, each consumed in order."""

    first: object
    second: object

    def __post_init__(self):
        for part in (self.first, self.second):
            if not hasattr(part, "eval"):
                raise InputError("interleave parts must be scaling sequences")
        # the merged sequence must still be increasing often enough to
        # diverge; both parts diverge, so the merge does too

    def eval(self, n: int) -> Fraction:
        _check_index(n)
        if n % 2 == 1:
            return self.first.eval((n + 1) // 2)
        return self.second.eval(n // 2)


@dataclass(frozen=True)
class SubsequenceScaling:
    """r'_k = base(stride * k + offset), an affine strictly increasing
    re-indexing of another scaling."""

    base: object
    stride: int
    offset: int = 0

    def __post_init__(self):
        if not hasattr(self.base, "eval"):
            raise InputError("subsequence base must be a scaling sequence")
        if not isinstance(self.stride, int) or self.stride < 1:
            raise InputError("subsequence stride must be an integer >= 1")
        if not isinstance(self.offset, int) or self.stride + self.offset < 1:
            raise InputError("subsequence must start at index >= 1")

    def eval(self, n: int) -> Fraction:
        _check_index(n)
        return self.base.eval(self.stride * n + self.offset)


def _check_index(n):
    if not isinstance(n, int) or n < 1:
        raise InputError("sequence indices start at 1")


def effective_geometric(scaling):
    """Collapse to (ratio, coeff) when the scaling is exactly geometric in
    its own index, else None."""
    if isinstance(scaling, GeometricScaling):
        return scaling.q, scaling.c
    if isinstance(scaling, SubsequenceScaling):
        eff = effective_geometric(scaling.base)
        if eff is None:
            return None
        q, c = eff
        return q ** scaling.stride, c * q ** scaling.offset
    return None


# ---------------------------------------------------------------------------
# Point-sequence specifications


@dataclass(frozen=True)
class AffineSpec:
    """x_n = sign(n) * (a * r_n + b * u_n) with u_n one of 1, sqrt(r_n),
    log(1 + r_n); sign is +1 always or (-1)**n."""

    a: Fraction
    sub: str = "const"
    b: Fraction = Fraction(0)
    sign: str = "plus"

    def __post_init__(self):
        object.__setattr__(self, "a", rat(self.a))
        object.__setattr__(self, "b", rat(self.b))
        if self.sub not in ("const", "sqrt", "log"):
            raise InputError("sub must be const, sqrt, or log")
        if self.sign not in ("plus", "alternating"):
            raise InputError("sign must be plus or alternating")

    def terms(self):
        sub_atom = {"const": "one", "sqrt": "sqrt_r", "log": "log_r"}[self.sub]
        if self.sign == "alternating":
            out = {"alt_r": self.a, "alt_" + sub_atom: self.b}
        else:
            out = {"r": self.a, sub_atom: self.b}
        return {k: v for k, v in out.items() if v != 0}


@dataclass(frozen=True)
class ClosedFormSpec:
    """x_n as an exact-coefficient combination of the supported atoms."""

    terms: tuple

    def __init__(self, terms):
        if isinstance(terms, dict):
            items = terms.items()
        else:
            items = terms
        norm = []
        for atom, coef in items:
            if atom not in ATOMS:
                raise InputError(f"unknown atom {atom!r}")
            coef = rat(coef)
            if coef != 0:
                norm.append((atom, coef))
        norm.sort(key=lambda kv: ATOMS.index(kv[0]))
        seen = [a for a, _ in norm]
        if len(seen) != len(set(seen)):
            raise InputError("duplicate atom in closed form")
        object.__setattr__(self, "terms", tuple(norm))

    def term_map(self):
        return dict(self.terms)


@dataclass(frozen=True)
class InSetSpec:
    """x_n = a nearest point of `model` to anchor * r_n.

    The anchor may differ between even and odd indices (a_odd defaults to
    the even value); this arises when projecting an alternating sequence.
    Ties at equal distance take the smaller point, deterministically.
    """

    model: object
    a: Fraction
    a_odd: object = None

    def __post_init__(self):
        object.__setattr__(self, "a", rat(self.a))
        if self.a_odd is not None:
            object.__setattr__(self, "a_odd", rat(self.a_odd))
        if setmodels.ambient_dim(self.model) != 1:
            raise InputError("set-valued sequences need a subset of the line")

    def anchors(self):
        odd = self.a if self.a_odd is None else self.a_odd
        return self.a, odd


def _spec_terms(spec):
    if isinstance(spec, AffineSpec):
        return spec.terms()
    if isinstance(spec, ClosedFormSpec):
        return spec.term_map()
    return None


# ---------------------------------------------------------------------------
# Exact evaluation


def eval_scaling(scaling, n: int) -> Fraction:
    return scaling.eval(n)


def eval_spec(spec, scaling, n: int):
    """Value of x_n.  Exact Fraction when the description is rational;
    float when a sqrt/log atom is involved."""
    r = scaling.eval(n)
    terms = _spec_terms(spec)
    if terms is not None:
        sign = -1 if n % 2 else 1
        exact = ZERO
        approx = 0.0
        has_float = False
        for atom, coef in terms.items():
            alt = atom.startswith("alt_")
            base = atom[4:] if alt else atom
            s = sign if alt else 1
            if base == "r":
                exact += coef * s * r
            elif base == "one":
                exact += coef * s
            elif base == "sqrt_r":
                has_float = True
                approx += float(coef) * s * math.exp(flog(r) / 2)
            elif base == "log_r":
                has_float = True
                approx += float(coef) * s * flog(1 + r)
        if has_float:
            return float(exact) + approx
        return exact
    if isinstance(spec, InSetSpec):
        a_even, a_odd = spec.anchors()
        anchor = (a_odd if n % 2 else a_even) * r
        return nearest_point(spec.model, anchor, eps=Fraction(1, 10 ** 9))
    raise InputError(f"unsupported sequence spec {type(spec).__name__}")


def spec_ratio_float(spec, scaling, n: int) -> float:
    """x_n / r_n as a float, computed without overflowing on huge r_n."""
    r = scaling.eval(n)
    terms = _spec_terms(spec)
    if terms is not None:
        sign = -1 if n % 2 else 1
        total = 0.0
        lg = flog(r)
        for atom, coef in terms.items():
            alt = atom.startswith("alt_")
            base = atom[4:] if alt else atom
            s = sign if alt else 1
            if base == "r":
                total += float(coef) * s
            elif base == "one":
                total += float(coef) * s * math.exp(-lg)
            elif base == "sqrt_r":
                total += float(coef) * s * math.exp(-lg / 2)
            elif base == "log_r":
                total += float(coef) * s * flog(1 + r) * math.exp(-lg)
        return total
    if isinstance(spec, InSetSpec):
        value = eval_spec(spec, scaling, n)
        return float(value / r)
    raise InputError(f"unsupported sequence spec {type(spec).__name__}")


# ---------------------------------------------------------------------------
# Phase classification


@dataclass(frozen=True)
class PhaseForm:
    """Certified normal form: x_n = phase * r_n + o(r_n), phase split by
    parity of n."""

    even: Fraction
    odd: Fraction
    status: str  # "exact" | "inconclusive"
    note: str = ""

    @property
    def ok(self):
        return self.status == "exact"


def _terms_phases(terms):
    plain = terms.get("r", ZERO)
    alt = terms.get("alt_r", ZERO)
    return plain + alt, plain - alt


def classify(spec, scaling) -> PhaseForm:
    """Reduce a spec to its phase form, certifying the sublinear remainder.

    Closed forms classify unconditionally.  Set-valued specs classify when
    the model's structure pins the selector: a finite covering bound on the
    relevant side, an attained extreme element, or a geometric model whose
    ratio is commensurable with a geometric scaling.
    """
    terms = _spec_terms(spec)
    if terms is not None:
        even, odd = _terms_phases(terms)
        return PhaseForm(even, odd, "exact", "closed form")
    if isinstance(spec, InSetSpec):
        a_even, a_odd = spec.anchors()
        even = _classify_inset_branch(spec.model, a_even, scaling, 0)
        odd = _classify_inset_branch(spec.model, a_odd, scaling, 1)
        if even is None or odd is None:
            return PhaseForm(ZERO, ZERO, "inconclusive",
                             "selector not certified over this set")
        (pe, note_e) = even
        (po, note_o) = odd
        note = note_e if note_e == note_o else f"{note_e} / {note_o}"
        return PhaseForm(pe, po, "exact", note)
    return PhaseForm(ZERO, ZERO, "inconclusive",
                     f"unsupported spec {type(spec).__name__}")


def _classify_inset_branch(model, anchor, scaling, parity):
    """Phase of nearest(model, anchor * r_n) along one parity class, or
    None when not certifiable.  Returns (phase, note)."""
    if anchor == 0:
        try:
            pin = nearest_point(model, ZERO)
        except InputError:
            return None
        return ZERO, f"pinned at {fmt(pin)}"
    direction = 1 if anchor > 0 else -1
    cover = asymptotic_covering_bound(model, direction)
    if cover is not None:
        return anchor, f"covering bound {fmt(cover)}"
    pin = min_element(model) if direction == -1 else max_element(model)
    if pin is not None:
        return ZERO, f"pinned at {fmt(pin)}"
    if isinstance(model, (setmodels.GeometricPoints,
                          setmodels.GeometricBlocks)) and anchor > 0:
        got = _geometric_selector_phase(model, anchor, scaling, parity)
        if got is not None:
            return got
    return None


def _geometric_selector_phase(model, anchor, scaling, parity):
    """Selector over a geometric set under a commensurable geometric
    scaling: the ratio nearest/r is eventually constant along a parity
    class, and that constant is the phase."""
    eff = effective_geometric(scaling)
    if eff is None:
        return None
    q_s, c_s = eff
    q_m = model.q
    k = ipow_floor_log(q_m, q_s)
    if k < 1 or q_m ** k != q_s:
        return None
    if isinstance(model, setmodels.GeometricPoints):
        # past this threshold the nearest candidates stay above the set's
        # smallest point, so scale-invariance of the selector kicks in
        floor_val = model.c * q_m ** (model.n0 + 1)
        target = floor_val / (anchor * c_s)
        n_star = ipow_floor_log(q_s, target) + 1
        n_star = max(n_star, 1)
    else:
        n_star = 1
    if n_star % 2 != parity % 2:
        n_star += 1
    probes = [n_star, n_star + 2, n_star + 4]
    ratios = []
    for n in probes:
        r = scaling.eval(n)
        x = nearest_point(model, anchor * r)
        ratios.append(x / r)
    if ratios[0] == ratios[1] == ratios[2]:
        return ratios[0], f"geometric selector, ratio {fmt(ratios[0])}"
    raise InternalInvariantError(
        "commensurable geometric selector failed to stabilize: "
        + ", ".join(fmt(v) for v in ratios))


# ---------------------------------------------------------------------------
# Limit results


@dataclass(frozen=True)
class LimitResult:
    """Outcome of a rescaled limit.

    status "exact": `value` is the limit, as a Fraction.
    status "no_limit": the even/odd subsequences settle on different
        values; `clusters` lists (parity, value).
    status "estimated": numeric probe only; `value` is a float.
    status "inconclusive": nothing certified.
    """

    status: str
    value: object = None
    clusters: tuple = ()
    note: str = ""

    @property
    def exists(self):
        return self.status == "exact"


def _limit_from_phases(lo: Fraction, hi: Fraction, note="") -> LimitResult:
    if lo == hi:
        return LimitResult("exact", lo, note=note)
    return LimitResult(
        "no_limit",
        clusters=(("even", lo), ("odd", hi)),
        note=note or "parity subsequences disagree",
    )


def tilde_d(spec, scaling, p=0) -> LimitResult:
    """Normalized distance to the basepoint: lim |x_n - p| / r_n.

    The basepoint shift never moves the limit; it is accepted to make call
    sites read naturally.
    """
    rat(p)  # validates
    form = classify(spec, scaling)
    if not form.ok:
        return _numeric_tilde(spec, scaling)
    return _limit_from_phases(abs(form.even), abs(form.odd), form.note)


def d_r(x, y, scaling) -> LimitResult:
    """Pairwise rescaled limit lim |x_n - y_n| / r_n, when it exists."""
    fx = classify(x, scaling)
    fy = classify(y, scaling)
    if fx.ok and fy.ok:
        return _limit_from_phases(abs(fx.even - fy.even),
                                  abs(fx.odd - fy.odd))
    return _numeric_pair(x, y, scaling)


def d_up(x, y, scaling) -> LimitResult:
    """limsup |x_n - y_n| / r_n.  Always defined; exact whenever both
    sequences classify."""
    fx = classify(x, scaling)
    fy = classify(y, scaling)
    if fx.ok and fy.ok:
        value = max(abs(fx.even - fy.even), abs(fx.odd - fy.odd))
        return LimitResult("exact", value)
    est = _numeric_pair(x, y, scaling)
    if est.status == "no_limit":
        return LimitResult("estimated", max(v for _, v in est.clusters),
                           note="numeric probe")
    return est


def in_sequence_set(spec, scaling) -> bool:
    """Whether the sequence admits a finite normalized distance limit,
    i.e. belongs to the scaling's admissible set."""
    return tilde_d(spec, scaling).exists


# ---------------------------------------------------------------------------
# Numeric fallback

_NUMERIC_BLOCKS = (10, 11, 12)
_NUMERIC_TOL = 1e-9


def _numeric_parity_values(fn):
    """Per-parity block values at dyadic depths; None when a parity class
    fails to settle across the last three blocks."""
    out = {}
    for parity in (0, 1):
        vals = []
        for j in _NUMERIC_BLOCKS:
            n = (1 << j) + parity
            if (n % 2) != parity:
                n += 1
            vals.append(fn(n))
        if (abs(vals[2] - vals[1]) <= _NUMERIC_TOL
                and abs(vals[1] - vals[0]) <= _NUMERIC_TOL):
            out[parity] = vals[2]
        else:
            out[parity] = None
    return out


def _numeric_limit(fn, note) -> LimitResult:
    got = _numeric_parity_values(fn)
    even, odd = got[0], got[1]
    if even is None or odd is None:
        return LimitResult("inconclusive", note=note + "; probe unsettled")
    if abs(even - odd) <= _NUMERIC_TOL:
        return LimitResult("estimated", (even + odd) / 2, note=note)
    return LimitResult("no_limit",
                       clusters=(("even", even), ("odd", odd)),
                       note=note + "; numeric probe")


def _numeric_tilde(spec, scaling) -> LimitResult:
    return _numeric_limit(
        lambda n: abs(spec_ratio_float(spec, scaling, n)),
        "numeric probe of |x_n|/r_n")


def _numeric_pair(x, y, scaling) -> LimitResult:
    return _numeric_limit(
        lambda n: abs(spec_ratio_float(x, scaling, n)
                      - spec_ratio_float(y, scaling, n)),
        "numeric probe of |x_n - y_n|/r_n")


# ---------------------------------------------------------------------------
# Stability graph and maximal self-stable families


@dataclass(frozen=True)
class StabilityGraph:
    """Vertices are labeled sequences; an edge means the pairwise rescaled
    limit exists, and carries its exact value."""

    labels: tuple
    specs: tuple
    scaling: object
    tilde: tuple  # Fraction per label
    edges: tuple  # ((i, j), value) with i < j

    def edge_value(self, a, b):
        i, j = sorted((self.labels.index(a), self.labels.index(b)))
        for (u, v), value in self.edges:
            if (u, v) == (i, j):
                return value
        return None

    def neighbors(self, idx):
        out = set()
        for (u, v), _ in self.edges:
            if u == idx:
                out.add(v)
            elif v == idx:
                out.add(u)
        return out


def stability_graph(family, scaling) -> StabilityGraph:
    """Build the mutual-stability graph of a labeled family.

    Every member must admit a normalized distance limit.  Pairs whose
    rescaled limit cannot be settled either way raise, because a graph
    built over them would be guesswork.
    """
    items = sorted(family.items()) if isinstance(family, dict) else list(family)
    labels = tuple(k for k, _ in items)
    if len(labels) != len(set(labels)):
        raise InputError("family labels must be unique")
    if len(labels) > MAX_GRAPH_VERTICES:
        raise InputError(
            f"family of {len(labels)} exceeds the {MAX_GRAPH_VERTICES}-vertex"
            " bound")
    specs = tuple(s for _, s in items)
    tilde = []
    bad = []
    for label, spec in zip(labels, specs):
        res = tilde_d(spec, scaling)
        if not res.exists:
            bad.append(f"{label} ({res.status})")
            tilde.append(None)
        else:
            tilde.append(res.value)
    if bad:
        raise InputError(
            "family members without a normalized distance limit: "
            + ", ".join(bad))
    edges = []
    for i, j in combinations(range(len(labels)), 2):
        res = d_r(specs[i], specs[j], scaling)
        if res.status == "exact":
            edges.append(((i, j), res.value))
        elif res.status == "no_limit":
            continue
        else:
            raise GraphConstructionError(
                "pairwise limit undecided for "
                f"({labels[i]}, {labels[j]}): {res.note}",
                pair=(labels[i], labels[j]))
    return StabilityGraph(labels, specs, scaling, tuple(tilde), tuple(edges))


def maximal_self_stable(graph: StabilityGraph):
    """All maximal families in which every pair has a rescaled limit:
    the maximal cliques of the stability graph, each sorted, the list
    ordered for reproducibility."""
    n = len(graph.labels)
    adj = {i: graph.neighbors(i) for i in range(n)}
    cliques = []

    def expand(r, p, x):
        if not p and not x:
            cliques.append(tuple(sorted(r)))
            return
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    expand(set(), set(range(n)), set())
    named = sorted(tuple(graph.labels[i] for i in c) for c in cliques)
    zero_members = {graph.labels[i] for i in range(n)
                    if graph.tilde[i] == 0}
    for clique in named:
        if zero_members and not zero_members <= set(clique):
            raise InternalInvariantError(
                "a vanishing-ratio member is missing from a maximal family;"
                f" clique {clique}")
    return tuple(named)


# ---------------------------------------------------------------------------
# Pretangent space over a self-stable family


@dataclass(frozen=True)
class PretangentReport:
    space: object            # QuotientMetricSpace
    distinguished: object    # block label holding the vanishing members
    member_blocks: tuple     # (family label, block label)


def pretangent_space(graph: StabilityGraph, clique) -> PretangentReport:
    """Metric space of a maximal self-stable family: members at their
    pairwise rescaled limits, then points at distance zero identified.

    The vanishing-ratio members collapse to one distinguished point.
    """
    clique = tuple(clique)
    idx = []
    for label in clique:
        if label not in graph.labels:
            raise InputError(f"unknown family member {label!r}")
        idx.append(graph.labels.index(label))
    values = {}
    for a, b in combinations(range(len(idx)), 2):
        i, j = sorted((idx[a], idx[b]))
        value = None
        for (u, v), val in graph.edges:
            if (u, v) == (i, j):
                value = val
                break
        if value is None:
            raise InputError(
                f"({clique[a]}, {clique[b]}) is not a stable pair; "
                "pretangent spaces need a self-stable family")
        values[(a, b)] = value
    n = len(clique)
    dist = [[ZERO] * n for _ in range(n)]
    for (a, b), value in values.items():
        dist[a][b] = dist[b][a] = value
    try:
        space = make_space(clique, tuple(map(tuple, dist)))
    except InputError as exc:
        raise InternalInvariantError(
            f"rescaled-limit table is not a pseudometric: {exc}") from exc
    quotient = metric_identify(space)
    member_blocks = []
    distinguished = None
    for label in clique:
        block = quotient.projection[label]
        member_blocks.append((label, block))
        i = graph.labels.index(label)
        if graph.tilde[i] == 0:
            distinguished = block
    return PretangentReport(quotient, distinguished, tuple(member_blocks))


# ---------------------------------------------------------------------------
# Subsequence pushes


@dataclass(frozen=True)
class PushReport:
    stride: int
    offset: int
    scaling: object
    family: tuple          # (label, pushed spec)
    checks: tuple          # (kind, labels, before, after)

    def pushed(self, label):
        for name, spec in self.family:
            if name == label:
                return spec
        raise InputError(f"no pushed member {label!r}")


def _push_terms(terms, stride, offset):
    """Rewrite atoms under n -> stride*k + offset.

    (-1)**(stride*k+offset) is (-1)**offset when the stride is even (the
    alternation freezes) and (-1)**offset * (-1)**k when odd (it survives
    with a possible flip).  Atom magnitudes follow the pushed scaling, so
    coefficients are otherwise untouched.
    """
    sign = -1 if offset % 2 else 1
    out = {}
    for atom, coef in terms.items():
        if not atom.startswith("alt_"):
            out[atom] = out.get(atom, ZERO) + coef
            continue
        base = atom[4:]
        if stride % 2 == 0:
            out[base] = out.get(base, ZERO) + coef * sign
        else:
            out[atom] = out.get(atom, ZERO) + coef * sign
    return {k: v for k, v in out.items() if v != 0}


def _push_spec(spec, stride, offset):
    terms = _spec_terms(spec)
    if terms is not None:
        return ClosedFormSpec(_push_terms(terms, stride, offset))
    if isinstance(spec, InSetSpec):
        a_even, a_odd = spec.anchors()
        pick = (a_even, a_odd)
        new_even = pick[offset % 2]
        new_odd = pick[(stride + offset) % 2]
        return InSetSpec(spec.model, new_even, new_odd)
    raise InputError(f"unsupported sequence spec {type(spec).__name__}")


def subsequence_push(family, scaling, stride: int, offset: int = 0):
    """Re-index a whole family along n = stride*k + offset.

    Returns a PushReport whose checks record, member by member and stable
    pair by stable pair, that existing limits carried over unchanged (a
    limit that exists passes to every subsequence).  New limits may appear;
    they are reported, not checked against anything.
    """
    items = sorted(family.items()) if isinstance(family, dict) else list(family)
    pushed_scaling = SubsequenceScaling(scaling, stride, offset)
    pushed_items = [(label, _push_spec(spec, stride, offset))
                    for label, spec in items]
    checks = []
    for (label, spec), (_, pspec) in zip(items, pushed_items):
        before = tilde_d(spec, scaling)
        after = tilde_d(pspec, pushed_scaling)
        checks.append(("tilde_d", (label,), before, after))
        if before.exists:
            if not after.exists or after.value != before.value:
                raise InternalInvariantError(
                    f"push broke the normalized limit of {label}: "
                    f"{before.value} -> {after.status}")
    for (la, sa), (lb, sb) in combinations(items, 2):
        before = d_r(sa, sb, scaling)
        pa = _push_spec(sa, stride, offset)
        pb = _push_spec(sb, stride, offset)
        after = d_r(pa, pb, pushed_scaling)
        checks.append(("d_r", (la, lb), before, after))
        if before.exists:
            if not after.exists or after.value != before.value:
                raise InternalInvariantError(
                    f"push broke the pairwise limit of ({la}, {lb})")
    return PushReport(stride, offset, pushed_scaling, tuple(pushed_items),
                      tuple(checks))


# ---------------------------------------------------------------------------
# Tangency probe


@dataclass(frozen=True)
class ProbeOutcome:
    stride: int
    offset: int
    status: str           # "extension_witness" | "no_extension_found"
    witness: object = None
    detail: str = ""


def tangency_probe(graph: StabilityGraph, clique, index_maps, pool):
    """Search for strict extensions of a maximal family along re-indexings.

    For each affine index map, the family is pushed and every pool
    candidate is tested: it must admit a normalized limit, be stable with
    every pushed member, and sit at positive rescaled distance from all of
    them.  Finding one shows the family stops being maximal along that
    subsequence.  Not finding one is only a bounded search coming up empty,
    never a proof; the outcome says which.
    """
    clique = tuple(clique)
    family = {label: graph.specs[graph.labels.index(label)]
              for label in clique}
    pool_items = sorted(pool.items()) if isinstance(pool, dict) else list(pool)
    outcomes = []
    for stride, offset in index_maps:
        push = subsequence_push(family, graph.scaling, stride, offset)
        found = None
        notes = []
        for cand_label, cand in pool_items:
            if cand_label in clique:
                continue
            # the candidate rides the same subsequence as the family, so
            # its spec is pushed through the index map as well
            cand_pushed = _push_spec(cand, stride, offset)
            if not tilde_d(cand_pushed, push.scaling).exists:
                notes.append(f"{cand_label}: no normalized limit")
                continue
            distances = []
            ok = True
            for label, pspec in push.family:
                res = d_r(cand_pushed, pspec, push.scaling)
                if res.status == "exact":
                    distances.append(res.value)
                elif res.status == "no_limit":
                    ok = False
                    notes.append(f"{cand_label}: unstable against {label}")
                    break
                else:
                    ok = False
                    notes.append(f"{cand_label}: undecided against {label}")
                    break
            if not ok:
                continue
            if any(value == 0 for value in distances):
                notes.append(f"{cand_label}: collapses onto a member")
                continue
            found = cand_label
            break
        if found is not None:
            outcomes.append(ProbeOutcome(stride, offset, "extension_witness",
                                         found))
        else:
            outcomes.append(ProbeOutcome(
                stride, offset, "no_extension_found", None,
                "bounded search only: " + "; ".join(notes) if notes
                else "bounded search only"))
    return tuple(outcomes)


# ---------------------------------------------------------------------------
# Projection onto a subspace


@dataclass(frozen=True)
class ProjectionEntry:
    label: str
    projected: InSetSpec
    residual: LimitResult
    moved: bool


def project_family_to_subspace(family, scaling, model):
    """Replace each member by a nearest-point selector over `model`
    anchored at the member's phase, and measure what the replacement costs
    in the limsup-rescaled sense.

    A zero residual means the subspace carries an equivalent copy of the
    member; a positive one quantifies the defect (members whose phase
    falls inside a gap of the set cannot be tracked for free).
    """
    items = sorted(family.items()) if isinstance(family, dict) else list(family)
    entries = []
    for label, spec in items:
        form = classify(spec, scaling)
        if not form.ok:
            raise InputError(
                f"cannot project {label!r}: phase form not certified")
        projected = InSetSpec(model, form.even,
                              None if form.odd == form.even else form.odd)
        residual = d_up(spec, projected, scaling)
        moved = not (residual.status == "exact" and residual.value == 0)
        entries.append(ProjectionEntry(label, projected, residual, moved))
    return tuple(entries)


# ---------------------------------------------------------------------------
# Deriving a scaling from a drifting sequence


@dataclass(frozen=True)
class SpecDerivedScaling:
    """r_n = |x_n - p| for a rational closed-form sequence with a nonzero
    phase on both parities.  Indices where the value would vanish are
    rejected at evaluation."""

    spec: object
    base: object
    p: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "p", rat(self.p))

    def eval(self, n: int) -> Fraction:
        _check_index(n)
        value = eval_spec(self.spec, self.base, n)
        if not isinstance(value, Fraction):
            raise InputError("derived scalings need rational closed forms")
        r = abs(value - self.p)
        if r == 0:
            raise InputError(
                f"derived scaling vanishes at index {n}; choose another"
                " basepoint")
        return r


def scaling_from_spec(spec, base_scaling, p=0) -> SpecDerivedScaling:
    """Turn a drifting sequence into a scaling sequence via r_n = d(x_n, p).

    Requires an exact phase form with nonzero phases, so divergence is
    structural rather than sampled.
    """
    form = classify(spec, base_scaling)
    if not form.ok:
        raise InputError("cannot derive a scaling: phase form not certified")
    if form.even == 0 or form.odd == 0:
        raise InputError(
            "cannot derive a scaling from a sequence with a vanishing phase")
    derived = SpecDerivedScaling(spec, base_scaling, rat(p))
    for n in range(1, 9):
        derived.eval(n)
    return derived


# ---------------------------------------------------------------------------
# Serialization


def scaling_to_dict(scaling):
    if isinstance(scaling, GeometricScaling):
        return {"kind": "geometric", "q": fmt(scaling.q), "c": fmt(scaling.c)}
    if isinstance(scaling, PolynomialScaling):
        return {"kind": "polynomial", "degree": scaling.degree,
                "c": fmt(scaling.c)}
    if isinstance(scaling, InterleaveScaling):
        return {"kind": "interleave",
                "first": scaling_to_dict(scaling.first),
                "second": scaling_to_dict(scaling.second)}
    if isinstance(scaling, SubsequenceScaling):
        return {"kind": "subsequence", "base": scaling_to_dict(scaling.base),
                "stride": scaling.stride, "offset": scaling.offset}
    raise InputError(f"unsupported scaling {type(scaling).__name__}")


def scaling_from_dict(data):
    kind = data.get("kind")
    if kind == "geometric":
        return GeometricScaling(rat(data["q"]), rat(data.get("c", 1)))
    if kind == "polynomial":
        return PolynomialScaling(int(data["degree"]), rat(data.get("c", 1)))
    if kind == "interleave":
        return InterleaveScaling(scaling_from_dict(data["first"]),
                                 scaling_from_dict(data["second"]))
    if kind == "subsequence":
        return SubsequenceScaling(scaling_from_dict(data["base"]),
                                  int(data["stride"]),
                                  int(data.get("offset", 0)))
    raise InputError(f"unknown scaling kind {kind!r}")


def spec_to_dict(spec):
    if isinstance(spec, AffineSpec):
        return {"kind": "affine", "a": fmt(spec.a), "sub": spec.sub,
                "b": fmt(spec.b), "sign": spec.sign}
    if isinstance(spec, ClosedFormSpec):
        return {"kind": "closed_form",
                "terms": {atom: fmt(coef) for atom, coef in spec.terms}}
    if isinstance(spec, InSetSpec):
        out = {"kind": "in_set", "model": model_to_dict(spec.model),
               "a": fmt(spec.a)}
        if spec.a_odd is not None:
            out["a_odd"] = fmt(spec.a_odd)
        return out
    raise InputError(f"unsupported sequence spec {type(spec).__name__}")


def spec_from_dict(data):
    kind = data.get("kind")
    if kind == "affine":
        return AffineSpec(rat(data["a"]), data.get("sub", "const"),
                          rat(data.get("b", 0)), data.get("sign", "plus"))
    if kind == "closed_form":
        return ClosedFormSpec({atom: rat(coef)
                               for atom, coef in data["terms"].items()})
    if kind == "in_set":
        a_odd = data.get("a_odd")
        return InSetSpec(model_from_dict(data["model"]), rat(data["a"]),
                         None if a_odd is None else rat(a_odd))
    raise InputError(f"unknown sequence spec kind {kind!r}")
