"""Structured models of unbounded subsets of the line and the plane.

Every variant describes an unbounded set exactly, with rational parameters.
Membership, point-to-set distance, sphere slices, window decompositions and
gap searches are all closed-form; nothing here samples. Magnitudes like
q**200 stay exact on bigint rationals.

1-D points are Fractions, 2-D points are (Fraction, Fraction) pairs.
GeometricBlocks spans all integer scales (it is exactly self-similar under
its base), so it accumulates at 0; window decompositions that would have to
list infinitely many tiny components report a truncation scale instead.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, UnsupportedGeometryError
from .rationals import fmt, ipow_floor_log, rat

WINDOW_CAP = 200_000

ZERO = Fraction(0)


def as_rat_point(value):
    """Normalize a 1-D or 2-D point to Fraction / pair of Fractions."""
    if isinstance(value, (tuple, list)):
        if len(value) != 2:
            raise InputError(f"point must be 1-D or a pair: {value!r}")
        return (rat(value[0]), rat(value[1]))
    return rat(value)


def point_dim(value) -> int:
    return 2 if isinstance(value, tuple) else 1


def _rat_sqrt(value: Fraction):
    """Exact square root of a rational, or None if irrational."""
    if value < 0:
        return None
    ns = math.isqrt(value.numerator)
    ds = math.isqrt(value.denominator)
    if ns * ns == value.numerator and ds * ds == value.denominator:
        return Fraction(ns, ds)
    return None


# ---------------------------------------------------------------------------
# Variants


@dataclass(frozen=True)
class Lattice:
    step: Fraction
    offset: Fraction
    half: str = "full"  # full | plus | minus

    def __post_init__(self):
        if self.step <= 0:
            raise InputError("lattice step must be positive")
        if self.half not in ("full", "plus", "minus"):
            raise InputError(f"bad lattice half {self.half!r}")

    def point(self, k: int) -> Fraction:
        return self.step * k + self.offset

    def k_range_ok(self, k: int) -> bool:
        if self.half == "plus":
            return k >= 0
        if self.half == "minus":
            return k <= 0
        return True


@dataclass(frozen=True)
class Ray:
    origin: Fraction
    direction: int  # +1 -> [origin, inf), -1 -> (-inf, origin]

    def __post_init__(self):
        if self.direction not in (1, -1):
            raise InputError("ray direction must be +1 or -1")


@dataclass(frozen=True)
class FullLine:
    pass


@dataclass(frozen=True)
class GeometricPoints:
    q: Fraction
    c: Fraction
    n0: int

    def __post_init__(self):
        if self.q <= 1:
            raise InputError("geometric base must exceed 1")
        if self.c <= 0:
            raise InputError("geometric coefficient must be positive")

    def point(self, n: int) -> Fraction:
        return self.c * self.q**n


@dataclass(frozen=True)
class GeometricBlocks:
    """Union of [a*q**n, b*q**n] over all integers n; a normalized to [1, q)."""

    q: Fraction
    a: Fraction
    b: Fraction

    def __post_init__(self):
        if self.q <= 1:
            raise InputError("geometric base must exceed 1")
        if self.a <= 0 or not (self.a < self.b <= self.a * self.q):
            raise InputError("need 0 < a < b <= a*q")
        # canonical scale: shift the index so a lands in [1, q)
        shift = ipow_floor_log(self.q, self.a)
        if shift != 0:
            object.__setattr__(self, "a", self.a / self.q**shift)
            object.__setattr__(self, "b", self.b / self.q**shift)

    def block(self, n: int) -> tuple[Fraction, Fraction]:
        return (self.a * self.q**n, self.b * self.q**n)

    @property
    def gap_seed(self) -> Fraction:
        # gap between block n and n+1 has length gap_seed * q**n
        return self.a * self.q - self.b


@dataclass(frozen=True)
class PeriodicBlocks:
    period: Fraction
    blocks: tuple[tuple[Fraction, Fraction], ...]
    offset: Fraction = ZERO

    def __post_init__(self):
        if self.period <= 0:
            raise InputError("period must be positive")
        if not self.blocks:
            raise InputError("periodic pattern needs at least one block")
        prev_hi = None
        for lo, hi in self.blocks:
            if not (0 <= lo <= hi < self.period):
                raise InputError("pattern blocks must sit in [0, period)")
            if prev_hi is not None and lo <= prev_hi:
                raise InputError("pattern blocks must be sorted and disjoint")
            prev_hi = hi


@dataclass(frozen=True)
class FiniteUnion:
    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise InputError("empty union")
        dims = {ambient_dim(p) for p in self.parts}
        if len(dims) != 1:
            raise InputError("union mixes ambient dimensions")


@dataclass(frozen=True)
class FiniteModification:
    base: object
    added: tuple = ()
    removed: tuple = ()

    def __post_init__(self):
        if ambient_dim(self.base) != 1:
            raise InputError("finite modification supports 1-D bases only")


@dataclass(frozen=True)
class Reflected:
    base: object

    def __post_init__(self):
        if ambient_dim(self.base) != 1:
            raise InputError("reflection supports 1-D bases only")


@dataclass(frozen=True)
class HalfPlaneStrip:
    """{(u, v): u >= 0, c1 <= v <= c2} with c1 < 0 < c2."""

    c1: Fraction
    c2: Fraction

    def __post_init__(self):
        if not (self.c1 < 0 < self.c2):
            raise InputError("strip needs c1 < 0 < c2")


@dataclass(frozen=True)
class PlanarRay:
    """The nonnegative first-coordinate axis in the plane."""


@dataclass(frozen=True)
class Product2D:
    x: object
    y: object

    def __post_init__(self):
        if ambient_dim(self.x) != 1 or ambient_dim(self.y) != 1:
            raise InputError("product factors must be 1-D models")


_ONE_D = (Lattice, Ray, FullLine, GeometricPoints, GeometricBlocks,
          PeriodicBlocks, Reflected)
_TWO_D = (HalfPlaneStrip, PlanarRay, Product2D)


def ambient_dim(model) -> int:
    if isinstance(model, _TWO_D):
        return 2
    if isinstance(model, FiniteUnion):
        return ambient_dim(model.parts[0])
    if isinstance(model, FiniteModification):
        return 1
    if isinstance(model, _ONE_D):
        return 1
    raise InputError(f"not a set model: {model!r}")


# ---------------------------------------------------------------------------
# Membership


def contains(model, point) -> bool:
    point = as_rat_point(point)
    if point_dim(point) != ambient_dim(model):
        raise InputError("point dimension does not match model")
    if isinstance(model, Lattice):
        t = (point - model.offset) / model.step
        return t.denominator == 1 and model.k_range_ok(t.numerator)
    if isinstance(model, Ray):
        return point >= model.origin if model.direction == 1 else point <= model.origin
    if isinstance(model, FullLine):
        return True
    if isinstance(model, GeometricPoints):
        if point <= 0:
            return False
        ratio = point / model.c
        n = ipow_floor_log(model.q, ratio)
        return n >= model.n0 and model.q**n == ratio
    if isinstance(model, GeometricBlocks):
        if point <= 0:
            return False
        n = ipow_floor_log(model.q, point / model.a)
        return point <= model.b * model.q**n
    if isinstance(model, PeriodicBlocks):
        if point < model.offset:
            return False
        y = (point - model.offset) % model.period
        return any(lo <= y <= hi for lo, hi in model.blocks)
    if isinstance(model, FiniteUnion):
        return any(contains(p, point) for p in model.parts)
    if isinstance(model, FiniteModification):
        if point in model.removed:
            return False
        return point in model.added or contains(model.base, point)
    if isinstance(model, Reflected):
        return contains(model.base, -point)
    if isinstance(model, HalfPlaneStrip):
        u, v = point
        return u >= 0 and model.c1 <= v <= model.c2
    if isinstance(model, PlanarRay):
        u, v = point
        return v == 0 and u >= 0
    if isinstance(model, Product2D):
        return contains(model.x, point[0]) and contains(model.y, point[1])
    raise InputError(f"not a set model: {model!r}")


# ---------------------------------------------------------------------------
# Distance


def distance_to_set(model, point) -> Fraction:
    """Exact inf of distances from the point to the set.

    Raises UnsupportedGeometryError when the exact value is irrational
    (possible only for 2-D corner configurations).
    """
    return _distance_excluding(model, as_rat_point(point), frozenset())


def _distance_excluding(model, point, removed: frozenset) -> Fraction:
    if point_dim(point) != ambient_dim(model):
        raise InputError("point dimension does not match model")
    if isinstance(model, Lattice):
        return _lattice_distance(model, point, removed)
    if isinstance(model, Ray):
        # removing isolated points from a ray never changes the infimum
        if model.direction == 1:
            return max(ZERO, model.origin - point)
        return max(ZERO, point - model.origin)
    if isinstance(model, FullLine):
        return ZERO
    if isinstance(model, GeometricPoints):
        return _geometric_points_distance(model, point, removed)
    if isinstance(model, GeometricBlocks):
        if point <= 0:
            return -point  # blocks accumulate at 0; infimum, not attained
        n = ipow_floor_log(model.q, point / model.a)
        if point <= model.b * model.q**n:
            return ZERO
        return min(point - model.b * model.q**n,
                   model.a * model.q ** (n + 1) - point)
    if isinstance(model, PeriodicBlocks):
        return _periodic_distance(model, point, removed)
    if isinstance(model, FiniteUnion):
        return min(_distance_excluding(p, point, removed) for p in model.parts)
    if isinstance(model, FiniteModification):
        removed_all = removed | frozenset(model.removed)
        best = _distance_excluding(model.base, point, removed_all)
        for a in model.added:
            if a not in removed_all:
                best = min(best, abs(point - a))
        return best
    if isinstance(model, Reflected):
        return _distance_excluding(model.base, -point,
                                   frozenset(-r for r in removed))
    if isinstance(model, HalfPlaneStrip):
        u, v = point
        dv = max(ZERO, v - model.c2, model.c1 - v)
        if u >= 0:
            return dv
        if dv == 0:
            return -u
        return _pythagoras(-u, dv)
    if isinstance(model, PlanarRay):
        u, v = point
        if u >= 0:
            return abs(v)
        if v == 0:
            return -u
        return _pythagoras(-u, abs(v))
    if isinstance(model, Product2D):
        dx = _distance_excluding(model.x, point[0], frozenset())
        dy = _distance_excluding(model.y, point[1], frozenset())
        if dx == 0:
            return dy
        if dy == 0:
            return dx
        return _pythagoras(dx, dy)
    raise InputError(f"not a set model: {model!r}")


def _pythagoras(dx: Fraction, dy: Fraction) -> Fraction:
    root = _rat_sqrt(dx * dx + dy * dy)
    if root is None:
        raise UnsupportedGeometryError(
            "exact distance is irrational for this corner configuration"
        )
    return root


def _lattice_distance(model: Lattice, point, removed) -> Fraction:
    spread = len(removed) + 2
    k_mid = math.floor((point - model.offset) / model.step)
    best = None
    for k in range(k_mid - spread, k_mid + spread + 1):
        if not model.k_range_ok(k):
            continue
        p = model.point(k)
        if p in removed:
            continue
        d = abs(point - p)
        if best is None or d < best:
            best = d
    if best is None:
        # all nearby points removed or clamped; fall back to range edge
        edge = model.point(0)
        k = 0
        step_dir = 1 if model.half == "plus" else -1
        while edge in removed:
            k += step_dir
            edge = model.point(k)
        best = abs(point - edge)
    return best


def _geometric_points_distance(model: GeometricPoints, point, removed):
    spread = len(removed) + 2
    first = model.point(model.n0)
    if point <= first:
        n_mid = model.n0
    else:
        n_mid = ipow_floor_log(model.q, point / model.c)
    best = None
    for n in range(max(model.n0, n_mid - spread), n_mid + spread + 1):
        p = model.point(n)
        if p in removed:
            continue
        d = abs(point - p)
        if best is None or d < best:
            best = d
    if best is None:
        n = n_mid + spread + 1
        while model.point(n) in removed:
            n += 1
        best = abs(point - model.point(n))
    return best


def _periodic_distance(model: PeriodicBlocks, point, removed) -> Fraction:
    spread = len(removed) + 2
    k_mid = math.floor((point - model.offset) / model.period)
    best = None
    for k in range(max(0, k_mid - spread), max(0, k_mid) + spread + 1):
        base = model.offset + model.period * k
        for lo, hi in model.blocks:
            if lo == hi:
                p = base + lo
                if p in removed:
                    continue
                d = abs(point - p)
            else:
                # a continuum: removals cannot change the infimum
                clamped = min(max(point, base + lo), base + hi)
                d = abs(point - clamped)
            if best is None or d < best:
                best = d
    return best


def nearest_point(model, point, eps: Fraction = ZERO):
    """A set point achieving distance_to_set, or within eps when the
    infimum is not attained. Ties break toward the smaller point."""
    point = as_rat_point(point)
    d = distance_to_set(model, point)
    if ambient_dim(model) == 1:
        for cand in (point - d, point + d):
            if contains(model, cand):
                return cand
        # infimum not attained (accumulation or removed point)
        if eps <= 0:
            raise UnsupportedGeometryError(
                "distance infimum not attained; pass eps > 0"
            )
        step = eps
        for _ in range(64):
            for cand in (point - d - step, point + d + step):
                if contains(model, cand):
                    return cand
            step = step / 2
        raise UnsupportedGeometryError("no set point within eps of infimum")
    if isinstance(model, HalfPlaneStrip):
        u, v = point
        return (max(ZERO, u), min(max(v, model.c1), model.c2))
    if isinstance(model, PlanarRay):
        u, v = point
        return (max(ZERO, u), ZERO)
    raise UnsupportedGeometryError("nearest point unsupported for this model")


# ---------------------------------------------------------------------------
# Sphere slices


@dataclass(frozen=True)
class SphereSlice:
    """S(p, t) intersected with a model: a finite point set, or for the
    2-D strip an arc described by its reachable second-coordinate range."""

    kind: str  # points | arc
    points: tuple = ()
    center: object = None
    radius: Fraction = ZERO
    v_lo: Fraction = ZERO
    v_hi: Fraction = ZERO

    def is_empty(self) -> bool:
        return self.kind == "points" and not self.points


def sphere_slice(model, p, t) -> SphereSlice:
    p = as_rat_point(p)
    t = rat(t)
    if t < 0:
        raise InputError("sphere radius must be nonnegative")
    if ambient_dim(model) == 1:
        if point_dim(p) != 1:
            raise InputError("base point dimension mismatch")
        cands = (p - t, p + t) if t > 0 else (p,)
        pts = tuple(x for x in dict.fromkeys(cands) if contains(model, x))
        return SphereSlice("points", points=pts)
    if isinstance(model, PlanarRay):
        u0, v0 = p
        if v0 != 0:
            raise UnsupportedGeometryError("base point must sit on the axis")
        cands = ((u0 - t, ZERO), (u0 + t, ZERO)) if t > 0 else ((u0, ZERO),)
        pts = tuple(x for x in dict.fromkeys(cands) if contains(model, x))
        return SphereSlice("points", points=pts)
    if isinstance(model, HalfPlaneStrip):
        u0, v0 = p
        if v0 != 0 or u0 < 0:
            raise UnsupportedGeometryError(
                "strip slices need a base point on the nonnegative axis"
            )
        if t == 0:
            return SphereSlice("points", points=((u0, ZERO),))
        v_lo = max(-t, model.c1)
        v_hi = min(t, model.c2)
        # every v in [v_lo, v_hi] is reached at u = u0 + sqrt(t^2 - v^2) >= 0
        return SphereSlice("arc", center=p, radius=t, v_lo=v_lo, v_hi=v_hi)
    raise UnsupportedGeometryError("sphere slice unsupported for this model")


# ---------------------------------------------------------------------------
# Transforms


def scale_model(model, k):
    """Image under x -> k*x, exact; k must be a positive rational."""
    k = rat(k)
    if k <= 0:
        raise InputError("scale factor must be positive")
    if isinstance(model, Lattice):
        return Lattice(model.step * k, model.offset * k, model.half)
    if isinstance(model, Ray):
        return Ray(model.origin * k, model.direction)
    if isinstance(model, FullLine):
        return model
    if isinstance(model, GeometricPoints):
        return GeometricPoints(model.q, model.c * k, model.n0)
    if isinstance(model, GeometricBlocks):
        return GeometricBlocks(model.q, model.a * k, model.b * k)
    if isinstance(model, PeriodicBlocks):
        return PeriodicBlocks(
            model.period * k,
            tuple((lo * k, hi * k) for lo, hi in model.blocks),
            model.offset * k,
        )
    if isinstance(model, FiniteUnion):
        return FiniteUnion(tuple(scale_model(p, k) for p in model.parts))
    if isinstance(model, FiniteModification):
        return FiniteModification(
            scale_model(model.base, k),
            tuple(a * k for a in model.added),
            tuple(r * k for r in model.removed),
        )
    if isinstance(model, Reflected):
        return Reflected(scale_model(model.base, k))
    if isinstance(model, HalfPlaneStrip):
        return HalfPlaneStrip(model.c1 * k, model.c2 * k)
    if isinstance(model, PlanarRay):
        return model
    if isinstance(model, Product2D):
        return Product2D(scale_model(model.x, k), scale_model(model.y, k))
    raise InputError(f"not a set model: {model!r}")


# ---------------------------------------------------------------------------
# Window decompositions (1-D)


@dataclass(frozen=True)
class WindowStructure:
    """E cap [lo, hi] as sorted disjoint closed intervals (degenerate ones
    are points). truncated_below marks an accumulation tail in (0, scale]
    whose infinitely many tiny components were omitted."""

    intervals: tuple
    truncated_below: object = None


def _merge_intervals(items):
    items = sorted(items)
    out = []
    for lo, hi in items:
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def window_structure(model, lo, hi, resolution=None) -> WindowStructure:
    """Exact interval decomposition of E cap [lo, hi].

    resolution only matters for models accumulating at 0 (GeometricBlocks
    scales below it are summarized by truncated_below).
    """
    lo, hi = rat(lo), rat(hi)
    if hi < lo:
        raise InputError("empty window")
    if ambient_dim(model) != 1:
        raise UnsupportedGeometryError("window decomposition is 1-D only")
    intervals, trunc = _window_parts(model, lo, hi, resolution)
    merged = tuple(_merge_intervals(intervals))
    if len(merged) > WINDOW_CAP:
        raise UnsupportedGeometryError("window structure too rich")
    return WindowStructure(merged, trunc)


def _window_parts(model, lo, hi, resolution):
    if isinstance(model, Lattice):
        ks = []
        k_lo = math.ceil((lo - model.offset) / model.step)
        k_hi = math.floor((hi - model.offset) / model.step)
        if k_hi - k_lo > WINDOW_CAP:
            raise UnsupportedGeometryError("window structure too rich")
        for k in range(k_lo, k_hi + 1):
            if model.k_range_ok(k):
                p = model.point(k)
                ks.append((p, p))
        return ks, None
    if isinstance(model, Ray):
        if model.direction == 1:
            if model.origin > hi:
                return [], None
            return [(max(lo, model.origin), hi)], None
        if model.origin < lo:
            return [], None
        return [(lo, min(hi, model.origin))], None
    if isinstance(model, FullLine):
        return [(lo, hi)], None
    if isinstance(model, GeometricPoints):
        out = []
        if hi >= model.point(model.n0) and hi > 0:
            n_hi = ipow_floor_log(model.q, hi / model.c)
            n_lo = model.n0
            if lo > 0:
                n_lo = max(n_lo, ipow_floor_log(model.q, lo / model.c))
            if n_hi - n_lo > WINDOW_CAP:
                raise UnsupportedGeometryError("window structure too rich")
            for n in range(n_lo, n_hi + 1):
                p = model.point(n)
                if lo <= p <= hi:
                    out.append((p, p))
        return out, None
    if isinstance(model, GeometricBlocks):
        if hi <= 0:
            return [], None
        n_hi = ipow_floor_log(model.q, hi / model.a)
        trunc = None
        if lo > 0:
            n_lo = ipow_floor_log(model.q, lo / model.b)
            if model.b * model.q**n_lo < lo:
                n_lo += 1
            n_lo = min(n_lo, n_hi)
        else:
            scale = resolution if resolution is not None else hi / 2**20
            n_lo = ipow_floor_log(model.q, scale / model.a)
            trunc = model.b * model.q ** (n_lo - 1)
        if n_hi - n_lo > WINDOW_CAP:
            raise UnsupportedGeometryError("window structure too rich")
        out = []
        for n in range(n_lo, n_hi + 1):
            blo, bhi = model.block(n)
            blo, bhi = max(blo, lo), min(bhi, hi)
            if blo <= bhi:
                out.append((blo, bhi))
        return out, trunc
    if isinstance(model, PeriodicBlocks):
        out = []
        k_lo = max(0, math.floor((lo - model.offset) / model.period) - 1)
        k_hi = math.floor((hi - model.offset) / model.period) + 1
        if k_hi - k_lo > WINDOW_CAP:
            raise UnsupportedGeometryError("window structure too rich")
        for k in range(k_lo, k_hi + 1):
            base = model.offset + model.period * k
            for blo, bhi in model.blocks:
                clo, chi = max(base + blo, lo), min(base + bhi, hi)
                if clo <= chi:
                    out.append((clo, chi))
        return out, None
    if isinstance(model, FiniteUnion):
        out, trunc = [], None
        for part in model.parts:
            ivs, tr = _window_parts(part, lo, hi, resolution)
            out.extend(ivs)
            if tr is not None:
                trunc = tr if trunc is None else max(trunc, tr)
        return out, trunc
    if isinstance(model, FiniteModification):
        ivs, trunc = _window_parts(model.base, lo, hi, resolution)
        for a in model.added:
            if lo <= a <= hi:
                ivs.append((a, a))
        ivs = _merge_intervals(ivs)
        for r in model.removed:
            if not (lo <= r <= hi):
                continue
            nxt = []
            for ilo, ihi in ivs:
                if r < ilo or r > ihi:
                    nxt.append((ilo, ihi))
                elif ilo == ihi:  # drop the isolated point
                    continue
                elif r == ilo or r == ihi:
                    # open end: the open-gap lengths are unchanged, keep the
                    # closed hull for gap work (membership stays exact)
                    nxt.append((ilo, ihi))
                else:
                    nxt.append((ilo, ihi))
            ivs = nxt
        return ivs, trunc
    if isinstance(model, Reflected):
        ivs, trunc = _window_parts(model.base, -hi, -lo, resolution)
        out = [(-b, -a) for a, b in ivs]
        # the truncation marker is a scale about 0, so it carries over to
        # the mirrored side unchanged: |x| < trunc is unresolved
        return out, trunc
    raise UnsupportedGeometryError("window decomposition unsupported")


# ---------------------------------------------------------------------------
# Gap search on [0, h]


def is_nonnegative_model(model) -> bool:
    """Structural check that the set sits in [0, inf)."""
    if isinstance(model, Lattice):
        return model.half == "plus" and model.offset >= 0
    if isinstance(model, Ray):
        return model.direction == 1 and model.origin >= 0
    if isinstance(model, (GeometricPoints, GeometricBlocks)):
        return True
    if isinstance(model, PeriodicBlocks):
        return model.offset >= 0
    if isinstance(model, FiniteUnion):
        return all(is_nonnegative_model(p) for p in model.parts)
    if isinstance(model, FiniteModification):
        return is_nonnegative_model(model.base) and all(
            a >= 0 for a in model.added
        )
    return False


def gap_bound(model):
    """An upper bound valid for every open gap of [0,inf) \\ E, or None
    when gaps grow without bound. Finite bound certifies nonporosity."""
    if isinstance(model, Ray) and model.direction == 1:
        return max(ZERO, model.origin)
    if isinstance(model, Lattice) and model.half == "plus":
        return max(model.step, model.offset)
    if isinstance(model, PeriodicBlocks):
        gaps = [model.offset + model.blocks[0][0]]
        for (l1, h1), (l2, _) in zip(model.blocks, model.blocks[1:]):
            gaps.append(l2 - h1)
        gaps.append(model.period - model.blocks[-1][1] + model.blocks[0][0])
        return max(gaps)
    if isinstance(model, (GeometricPoints, GeometricBlocks)):
        return None
    if isinstance(model, FiniteUnion):
        bounds = [gap_bound(p) for p in model.parts]
        finite = [b for b in bounds if b is not None]
        return min(finite) if finite else None
    if isinstance(model, FiniteModification):
        base = gap_bound(model.base)
        if base is None:
            return None
        # removing r points can merge at most r+1 consecutive gaps
        return (len(model.removed) + 1) * max(base, ZERO)
    return None


def longest_gap(model, h) -> Fraction:
    """Length of the longest open interval inside [0, h] \\ E, exact."""
    h = rat(h)
    if h <= 0:
        raise InputError("gap horizon must be positive")
    if not is_nonnegative_model(model):
        raise InputError("gap search needs a model inside [0, inf)")
    if isinstance(model, Ray):
        return min(model.origin, h)
    if isinstance(model, Lattice):
        if model.offset > h:
            return h
        k_max = math.floor((h - model.offset) / model.step)
        last = model.point(k_max)
        cands = [model.offset, h - last]
        if k_max >= 1:
            cands.append(model.step)
        return max(cands)
    if isinstance(model, GeometricPoints):
        first = model.point(model.n0)
        if first > h:
            return h
        n_max = ipow_floor_log(model.q, h / model.c)
        cands = [first, h - model.point(n_max)]
        if n_max > model.n0:
            cands.append(model.point(n_max - 1) * (model.q - 1))
        return max(cands)
    if isinstance(model, GeometricBlocks):
        n = ipow_floor_log(model.q, h / model.a)
        full_below = model.gap_seed * model.q ** (n - 1)
        if h <= model.b * model.q**n:
            return full_below
        return max(full_below, h - model.b * model.q**n)
    if isinstance(model, PeriodicBlocks):
        return _periodic_longest_gap(model, h)
    # unions and modifications: merge exact window structures
    ws = window_structure(model, ZERO, h)
    best = ZERO
    prev_hi = ZERO
    for lo, hi in ws.intervals:
        best = max(best, lo - prev_hi)
        prev_hi = hi
    best = max(best, h - prev_hi)
    if ws.truncated_below is not None and best < ws.truncated_below:
        raise UnsupportedGeometryError(
            "gap search inconclusive below the truncation scale"
        )
    return best


def _periodic_longest_gap(model: PeriodicBlocks, h: Fraction) -> Fraction:
    first = model.offset + model.blocks[0][0]
    if first > h:
        return h
    cands = [first]
    # realized in-period gaps (each checked to fit inside [0, h])
    for (l1, h1), (l2, _) in zip(model.blocks, model.blocks[1:]):
        if model.offset + l2 <= h:
            cands.append(l2 - h1)
    wrap = model.period - model.blocks[-1][1] + model.blocks[0][0]
    if model.offset + model.period + model.blocks[0][0] <= h:
        cands.append(wrap)
    # trailing gap back from h to the previous covered point
    k = math.floor((h - model.offset) / model.period)
    prev = None
    for kk in (k, k - 1):
        if kk < 0 or prev is not None:
            continue
        base = model.offset + model.period * kk
        covered = [base + bhi for blo, bhi in model.blocks if base + blo <= h]
        inside = [
            min(h, c) for c in covered
        ]
        if inside:
            prev = max(inside)
    if prev is None:
        prev = first  # h sits before the second block pattern
        cands.append(max(ZERO, h - first))
    else:
        cands.append(h - prev)
    return max(cands)


def critical_gap_h_values(model, h_lo, h_hi, cap: int = 512):
    """Structurally critical horizons: points where a full gap just fits.

    For geometric structure these are where l(h)/h peaks; injecting them
    into an estimator grid makes the probed sup exact."""
    out = set()
    if isinstance(model, GeometricPoints):
        if h_hi >= model.point(model.n0):
            n_hi = ipow_floor_log(model.q, h_hi / model.c)
            n = n_hi
            while n >= model.n0 and len(out) < cap:
                p = model.point(n)
                if p < h_lo:
                    break
                out.add(p)
                n -= 1
    elif isinstance(model, GeometricBlocks):
        n = ipow_floor_log(model.q, h_hi / model.a)
        while len(out) < cap:
            p = model.a * model.q**n
            if p < h_lo:
                break
            if p <= h_hi:
                out.add(p)
            n -= 1
    elif isinstance(model, FiniteUnion):
        for part in model.parts:
            out |= set(critical_gap_h_values(part, h_lo, h_hi, cap))
    elif isinstance(model, FiniteModification):
        out |= set(critical_gap_h_values(model.base, h_lo, h_hi, cap))
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# Structural bounds used by sequence classification


def asymptotic_covering_bound(model, direction: int):
    """Bound on distance_to_set(x) valid for all far-enough x on one side
    (direction +1: x -> +inf, -1: x -> -inf), or None when unbounded."""
    if isinstance(model, FullLine):
        return ZERO
    if isinstance(model, Ray):
        return ZERO if model.direction == direction else None
    if isinstance(model, Lattice):
        if model.half == "full":
            return model.step / 2
        ok = (model.half == "plus") == (direction == 1)
        return model.step / 2 if ok else None
    if isinstance(model, PeriodicBlocks):
        if direction != 1:
            return None
        gaps = [l2 - h1 for (_, h1), (l2, _) in zip(model.blocks,
                                                    model.blocks[1:])]
        gaps.append(model.period - model.blocks[-1][1] + model.blocks[0][0])
        return max(gaps) / 2
    if isinstance(model, (GeometricPoints, GeometricBlocks)):
        return None
    if isinstance(model, FiniteUnion):
        bounds = [asymptotic_covering_bound(p, direction)
                  for p in model.parts]
        finite = [b for b in bounds if b is not None]
        return min(finite) if finite else None
    if isinstance(model, FiniteModification):
        # added/removed points are bounded, so the far behavior is the base's
        return asymptotic_covering_bound(model.base, direction)
    if isinstance(model, Reflected):
        return asymptotic_covering_bound(model.base, -direction)
    return None


def _ascending_candidates(model, count: int):
    """First few elements of a bounded-below discrete-or-ray model, ascending.

    Returns None when the minimum side is a continuum edge or unbounded.
    """
    if isinstance(model, Lattice) and model.half == "plus":
        return [model.point(k) for k in range(count)]
    if isinstance(model, GeometricPoints):
        return [model.point(model.n0 + k) for k in range(count)]
    if isinstance(model, PeriodicBlocks):
        if any(lo < hi for lo, hi in model.blocks):
            return None
        out = []
        k = 0
        while len(out) < count:
            base = model.offset + model.period * k
            for lo, _ in model.blocks:
                out.append(base + lo)
            k += 1
        return out[:count]
    return None


def min_element(model):
    """The set's minimum, or None when absent (unbounded below, or an
    infimum that is not attained)."""
    if isinstance(model, Lattice):
        return model.offset if model.half == "plus" else None
    if isinstance(model, Ray):
        return model.origin if model.direction == 1 else None
    if isinstance(model, FullLine):
        return None
    if isinstance(model, GeometricPoints):
        return model.point(model.n0)
    if isinstance(model, GeometricBlocks):
        return None  # accumulates at 0, infimum not attained
    if isinstance(model, PeriodicBlocks):
        return model.offset + model.blocks[0][0]
    if isinstance(model, FiniteUnion):
        mins = [min_element(p) for p in model.parts]
        if any(m is None for m in mins):
            return None
        return min(mins)
    if isinstance(model, FiniteModification):
        base_min = min_element(model.base)
        if base_min is None:
            return None
        cands = [a for a in model.added if a not in model.removed]
        if base_min not in model.removed:
            cands.append(base_min)
        else:
            asc = _ascending_candidates(model.base, len(model.removed) + 2)
            if asc is None:
                return None  # removed the closed edge of a continuum
            cands.extend(p for p in asc if p not in model.removed)
        return min(cands) if cands else None
    if isinstance(model, Reflected):
        top = max_element(model.base)
        return None if top is None else -top
    return None


def max_element(model):
    if isinstance(model, Lattice):
        return model.offset if model.half == "minus" else None
    if isinstance(model, Ray):
        return model.origin if model.direction == -1 else None
    if isinstance(model, Reflected):
        bottom = min_element(model.base)
        return None if bottom is None else -bottom
    if isinstance(model, FiniteUnion):
        tops = [max_element(p) for p in model.parts]
        if any(t is None for t in tops):
            return None
        return max(tops)
    if isinstance(model, FiniteModification):
        reflected = FiniteModification(
            Reflected(model.base),
            tuple(-a for a in model.added),
            tuple(-r for r in model.removed),
        )
        bottom = min_element(reflected)
        return None if bottom is None else -bottom
    return None


# ---------------------------------------------------------------------------
# Open-interval intersection (exact)


def intersects_open_interval(model, lo, hi) -> bool:
    """Does E meet the open interval (lo, hi)? Exact for 1-D models."""
    lo, hi = rat(lo), rat(hi)
    if hi <= lo:
        return False
    if isinstance(model, Lattice):
        k = math.floor((lo - model.offset) / model.step) + 1
        if model.half == "plus":
            k = max(k, 0)
        elif model.half == "minus":
            k_top = math.ceil((hi - model.offset) / model.step) - 1
            return k <= min(k_top, 0) and model.point(min(k_top, 0)) > lo
        return model.point(k) < hi
    if isinstance(model, Ray):
        if model.direction == 1:
            return hi > max(lo, model.origin)
        return lo < min(hi, model.origin) or (lo < model.origin < hi)
    if isinstance(model, FullLine):
        return True
    if isinstance(model, GeometricPoints):
        if hi <= 0:
            return False
        n = model.n0
        if lo > 0 and lo / model.c >= model.q**model.n0:
            n = max(n, ipow_floor_log(model.q, lo / model.c) + 1)
        return model.point(n) > lo and model.point(n) < hi
    if isinstance(model, GeometricBlocks):
        if hi <= 0:
            return False
        n = ipow_floor_log(model.q, hi / model.a)
        if model.a * model.q**n == hi:
            n -= 1  # block must start strictly before hi
        return model.b * model.q**n > lo
    if isinstance(model, PeriodicBlocks):
        if hi <= model.offset:
            return False
        if hi - lo > 2 * model.period:
            return True
        k_lo = max(0, math.floor((lo - model.offset) / model.period) - 1)
        k_hi = math.floor((hi - model.offset) / model.period) + 1
        for k in range(k_lo, k_hi + 1):
            base = model.offset + model.period * k
            for blo, bhi in model.blocks:
                if base + blo < hi and base + bhi > lo:
                    return True
        return False
    if isinstance(model, FiniteUnion):
        return any(intersects_open_interval(p, lo, hi) for p in model.parts)
    if isinstance(model, FiniteModification):
        if any(lo < a < hi and a not in model.removed for a in model.added):
            return True
        if not intersects_open_interval(model.base, lo, hi):
            return False
        if not model.removed:
            return True
        pts = points_in_open_interval(
            model.base, lo, hi, limit=len(model.removed) + 1
        )
        if pts is None:  # a continuum chunk: removals cannot empty it
            return True
        return any(p not in model.removed for p in pts)
    if isinstance(model, Reflected):
        return intersects_open_interval(model.base, -hi, -lo)
    raise UnsupportedGeometryError("interval intersection is 1-D only")


def points_in_open_interval(model, lo, hi, limit: int):
    """Up to limit set points inside (lo, hi) for discrete models, or None
    when the intersection contains a continuum."""
    lo, hi = rat(lo), rat(hi)
    if isinstance(model, Lattice):
        out = []
        k = math.floor((lo - model.offset) / model.step) + 1
        while model.point(k) < hi and len(out) < limit:
            if model.k_range_ok(k):
                out.append(model.point(k))
            k += 1
            if model.half == "minus" and k > 0:
                break
        return out
    if isinstance(model, GeometricPoints):
        out = []
        n = model.n0
        if lo > 0 and lo / model.c >= model.q**model.n0:
            n = max(n, ipow_floor_log(model.q, lo / model.c) + 1)
        while model.point(n) < hi and len(out) < limit:
            if model.point(n) > lo:
                out.append(model.point(n))
            n += 1
        return out
    if isinstance(model, (Ray, FullLine, GeometricBlocks)):
        return None if intersects_open_interval(model, lo, hi) else []
    if isinstance(model, PeriodicBlocks):
        if any(blo < bhi for blo, bhi in model.blocks):
            return None if intersects_open_interval(model, lo, hi) else []
        out = []
        k = max(0, math.floor((lo - model.offset) / model.period))
        while len(out) < limit:
            base = model.offset + model.period * k
            if base > hi:
                break
            for blo, _ in model.blocks:
                if lo < base + blo < hi and len(out) < limit:
                    out.append(base + blo)
            k += 1
        return out
    if isinstance(model, FiniteUnion):
        out = []
        for part in model.parts:
            got = points_in_open_interval(part, lo, hi, limit)
            if got is None:
                return None
            out.extend(got)
        return sorted(set(out))[:limit]
    if isinstance(model, FiniteModification):
        got = points_in_open_interval(model.base, lo, hi,
                                      limit + len(model.removed))
        if got is None:
            return None
        pts = [p for p in got if p not in model.removed]
        pts += [a for a in model.added
                if lo < a < hi and a not in model.removed]
        return sorted(set(pts))[:limit]
    if isinstance(model, Reflected):
        got = points_in_open_interval(model.base, -hi, -lo, limit)
        return None if got is None else sorted(-p for p in got)[:limit]
    raise UnsupportedGeometryError("point listing unsupported")


# ---------------------------------------------------------------------------
# Serialization


def model_to_dict(model) -> dict:
    if isinstance(model, Lattice):
        return {"kind": "lattice", "step": fmt(model.step),
                "offset": fmt(model.offset), "half": model.half}
    if isinstance(model, Ray):
        return {"kind": "ray", "origin": fmt(model.origin),
                "direction": "+" if model.direction == 1 else "-"}
    if isinstance(model, FullLine):
        return {"kind": "full_line"}
    if isinstance(model, GeometricPoints):
        return {"kind": "geometric_points", "q": fmt(model.q),
                "c": fmt(model.c), "n0": model.n0}
    if isinstance(model, GeometricBlocks):
        return {"kind": "geometric_blocks", "q": fmt(model.q),
                "a": fmt(model.a), "b": fmt(model.b)}
    if isinstance(model, PeriodicBlocks):
        return {"kind": "periodic_blocks", "period": fmt(model.period),
                "blocks": [[fmt(lo), fmt(hi)] for lo, hi in model.blocks],
                "offset": fmt(model.offset)}
    if isinstance(model, FiniteUnion):
        return {"kind": "finite_union",
                "parts": [model_to_dict(p) for p in model.parts]}
    if isinstance(model, FiniteModification):
        return {"kind": "finite_modification",
                "base": model_to_dict(model.base),
                "added": [fmt(a) for a in model.added],
                "removed": [fmt(r) for r in model.removed]}
    if isinstance(model, Reflected):
        return {"kind": "reflected", "base": model_to_dict(model.base)}
    if isinstance(model, HalfPlaneStrip):
        return {"kind": "half_plane_strip", "c1": fmt(model.c1),
                "c2": fmt(model.c2)}
    if isinstance(model, PlanarRay):
        return {"kind": "planar_ray"}
    if isinstance(model, Product2D):
        return {"kind": "product", "x": model_to_dict(model.x),
                "y": model_to_dict(model.y)}
    raise InputError(f"not a set model: {model!r}")


def model_from_dict(data) -> object:
    if not isinstance(data, dict) or "kind" not in data:
        raise InputError("model JSON needs a 'kind'")
    kind = data["kind"]
    try:
        if kind == "lattice":
            half = data.get("half", "full")
            if half is True:
                half = "plus"
            if half is False:
                half = "full"
            return Lattice(rat(data["step"]), rat(data["offset"]), half)
        if kind == "ray":
            direction = data.get("direction", "+")
            return Ray(rat(data["origin"]), 1 if direction in ("+", 1) else -1)
        if kind == "full_line":
            return FullLine()
        if kind == "geometric_points":
            return GeometricPoints(rat(data["q"]), rat(data["c"]),
                                   int(data.get("n0", 0)))
        if kind == "geometric_blocks":
            return GeometricBlocks(rat(data["q"]), rat(data["a"]),
                                   rat(data["b"]))
        if kind == "periodic_blocks":
            return PeriodicBlocks(
                rat(data["period"]),
                tuple((rat(lo), rat(hi)) for lo, hi in data["blocks"]),
                rat(data.get("offset", 0)),
            )
        if kind == "finite_union":
            return FiniteUnion(tuple(model_from_dict(p)
                                     for p in data["parts"]))
        if kind == "finite_modification":
            return FiniteModification(
                model_from_dict(data["base"]),
                tuple(rat(a) for a in data.get("added", [])),
                tuple(rat(r) for r in data.get("removed", [])),
            )
        if kind == "reflected":
            return Reflected(model_from_dict(data["base"]))
        if kind == "half_plane_strip":
            return HalfPlaneStrip(rat(data["c1"]), rat(data["c2"]))
        if kind == "planar_ray":
            return PlanarRay()
        if kind == "product":
            return Product2D(model_from_dict(data["x"]),
                             model_from_dict(data["y"]))
    except KeyError as exc:
        raise InputError(f"model JSON missing field {exc}") from exc
    raise InputError(f"unknown model kind {kind!r}")


def model_to_json(model) -> str:
    return json.dumps(model_to_dict(model), sort_keys=True)


def model_from_json(text: str):
    try:
        return model_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise InputError(f"bad model JSON: {exc}") from exc
