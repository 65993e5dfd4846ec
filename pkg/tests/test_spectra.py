"""Distance-set models and scaled window probes.

The central identity: s belongs to the distance set from p exactly when
p+s or p-s belongs to the original set, so every distance-set case is
checked pointwise against raw membership. Window hits are cross-checked
by enumerating the candidate set points inside the pulled-back interval.
"""

import math
from fractions import Fraction

import pytest

from farfield import (
    FiniteModification,
    FiniteUnion,
    FullLine,
    GeometricBlocks,
    GeometricScaling,
    HalfPlaneStrip,
    InputError,
    Lattice,
    PlanarRay,
    Ray,
    UnsupportedGeometryError,
    compare_spectra,
    contains,
    distance_set,
    spectrum_contains,
    window_hits,
)

F = Fraction


def s_grid(hi, denom=4):
    return [F(k, denom) for k in range(0, hi * denom + 1)]


# ---------------------------------------------------------------------------
# Distance sets


DS_CASES = [
    (FullLine(), F(7, 3)),
    (Ray(F(0), 1), F(0)),
    (Ray(F(0), 1), F(3)),
    (Ray(F(2), 1), F(0)),
    (Ray(F(1), -1), F(4)),
    (Lattice(F(1), F(0)), F(0)),
    (Lattice(F(1), F(0)), F(5)),
    (Lattice(F(1), F(0)), F(1, 3)),
    (Lattice(F(3, 2), F(1, 4)), F(2)),
    (Lattice(F(1), F(0), "plus"), F(2)),
    (Lattice(F(1), F(0), "plus"), F(-3)),
    (GeometricBlocks(F(4), F(1), F(2)), F(0)),
    (FiniteUnion((Ray(F(0), -1), Ray(F(1), 1))), F(0)),
]


@pytest.mark.parametrize("model,p", DS_CASES,
                         ids=[f"case{i}" for i in range(len(DS_CASES))])
def test_distance_set_matches_membership(model, p):
    ds = distance_set(model, p)
    for s in s_grid(12, denom=6):
        want = contains(model, p + s) or contains(model, p - s)
        assert contains(ds, s) == want, s


def test_distance_set_structured_forms():
    assert distance_set(FullLine(), F(9)) == Ray(F(0), 1)
    assert distance_set(Ray(F(0), 1), F(3)) == Ray(F(0), 1)
    assert distance_set(Lattice(F(1), F(0)), F(5)) \
        == Lattice(F(1), F(0), "plus")
    thirds = distance_set(Lattice(F(1), F(0)), F(1, 3))
    assert isinstance(thirds, FiniteUnion) and len(thirds.parts) == 2


def test_distance_set_plane_cases():
    strip = HalfPlaneStrip(F(-1), F(2))
    assert distance_set(strip, (F(4), F(0))) == Ray(F(0), 1)
    assert distance_set(PlanarRay(), (F(2), F(0))) == Ray(F(0), 1)
    with pytest.raises(UnsupportedGeometryError):
        distance_set(strip, (F(1), F(1)))


def test_distance_set_dimension_guard():
    with pytest.raises(InputError):
        distance_set(FullLine(), (F(1), F(1)))


# ---------------------------------------------------------------------------
# Window hits


def gb_blocks_between(model, lo, hi):
    out = []
    for n in range(-100, 100):
        a, b = model.block(n)
        if b < lo:
            continue
        if a > hi:
            break
        out.append((a, b))
    return out


def oracle_hit_gb(model, t, eps, r):
    lo, hi = (t - eps) * r, (t + eps) * r
    if hi <= 0:
        return False
    lo = max(lo, F(0))
    # a block meets the open window iff it starts below hi and ends above lo
    for a, b in gb_blocks_between(model, max(lo / 2, F(1, 10 ** 9)), hi * 2):
        if a < hi and b > lo:
            return True
    return hi > 0 and lo == 0  # accumulation at the origin fills (0, hi)


def test_window_hits_match_block_enumeration():
    gb = GeometricBlocks(F(4), F(1), F(2))
    eps = F(1, 100)
    for base, coef in ((F(4), F(4)), (F(4), F(2))):
        scaling = GeometricScaling(base, coef)
        for t in (F(0), F(1, 4), F(3, 4), F(1), F(3, 2), F(2)):
            hits = window_hits(gb, F(0), t, eps, scaling, 12)
            want = tuple(
                n for n in range(1, 13)
                if oracle_hit_gb(gb, t, eps, scaling.eval(n))
            )
            assert hits == want, (t, base, coef)


def test_window_hits_monotone_in_epsilon():
    lat = Lattice(F(1), F(0))
    scaling = GeometricScaling(F(2), F(1))
    for t in (F(0), F(1, 2), F(5, 4)):
        small = set(window_hits(lat, F(0), t, F(1, 200), scaling, 30))
        large = set(window_hits(lat, F(0), t, F(1, 20), scaling, 30))
        assert small <= large


def test_window_hit_input_guards():
    lat = Lattice(F(1), F(0))
    scaling = GeometricScaling(F(2), F(1))
    with pytest.raises(InputError):
        window_hits(lat, F(0), F(-1), F(1, 10), scaling, 10)
    with pytest.raises(InputError):
        window_hits(lat, F(0), F(1), F(0), scaling, 10)
    with pytest.raises(InputError):
        window_hits(lat, F(0), F(1), F(1, 10), scaling, 0)
    with pytest.raises(InputError):
        spectrum_contains(lat, F(0), F(1), F(1, 10), scaling, persistence=0)


def test_spectrum_verdict_thresholds():
    gb = GeometricBlocks(F(4), F(1), F(2))
    s1 = GeometricScaling(F(4), F(4))       # r_n = 4**(n+1)
    s2 = GeometricScaling(F(4), F(2))       # r_n = 2*4**n
    # windows (3/4 +- eps) * 2 * 4**n sit inside the blocks [4**m, 2*4**m]
    inside = spectrum_contains(gb, F(0), F(3, 4), F(1, 100), s2)
    assert inside.status == "present"
    assert len(inside.hits) >= inside.persistence
    gap = spectrum_contains(gb, F(0), F(3, 4), F(1, 100), s1)
    assert gap.status == "absent_at_horizon"
    # the window sits inside the doubling gap for every index
    assert gap.hits == ()


# ---------------------------------------------------------------------------
# Comparison over a grid


def test_porous_set_separates_the_two_scalings():
    gb = GeometricBlocks(F(4), F(1), F(2))
    s1 = GeometricScaling(F(4), F(4))
    s2 = GeometricScaling(F(4), F(2))
    grid = [F(k, 8) for k in range(0, 33)]
    comp = compare_spectra(gb, F(0), s1, s2, grid, F(1, 100), 50, 10)
    assert F(3, 4) in comp.differing_t
    row = next(r for r in comp.rows if r[0] == F(3, 4))
    assert row[1] == "absent_at_horizon" and row[2] == "present"
    assert row[3] is not None  # some index witnesses the divergence


def test_nonporous_sets_agree_everywhere():
    s1 = GeometricScaling(F(4), F(4))
    s2 = GeometricScaling(F(4), F(2))
    grid = [F(k, 8) for k in range(0, 33)]
    for model in (Ray(F(0), 1), Lattice(F(1), F(0))):
        comp = compare_spectra(model, F(0), s1, s2, grid, F(1, 100), 50, 10)
        assert comp.differing_t == ()
        assert all(row[1] == row[2] for row in comp.rows)


def test_comparison_rows_cover_the_grid():
    lat = Lattice(F(1), F(0))
    s1 = GeometricScaling(F(2), F(1))
    s2 = GeometricScaling(F(3), F(1))
    grid = [F(0), F(1, 2), F(1)]
    comp = compare_spectra(lat, F(0), s1, s2, grid, F(1, 10), 20, 5)
    assert [row[0] for row in comp.rows] == grid


def test_strip_spectrum_full():
    strip = HalfPlaneStrip(F(-1), F(2))
    s1 = GeometricScaling(F(4), F(4))
    s2 = GeometricScaling(F(4), F(2))
    grid = [F(k, 4) for k in range(0, 9)]
    comp = compare_spectra(strip, (F(0), F(0)), s1, s2, grid, F(1, 100))
    assert comp.differing_t == ()
    assert all(row[1] == "present" for row in comp.rows)
