"""Laws of rescaled limits on a seeded corpus of closed-form families.

Everything here is symbolic: the corpus draws random coefficient
combinations of the supported atoms, the laws are asserted with exact
Fraction equality, and the clique search is cross-checked against subset
enumeration.
"""

import itertools
import random
from fractions import Fraction

import pytest

from farfield import (
    AffineSpec,
    ClosedFormSpec,
    GeometricPoints,
    GeometricScaling,
    GraphConstructionError,
    InSetSpec,
    InputError,
    Lattice,
    PolynomialScaling,
    SubsequenceScaling,
    d_r,
    d_up,
    eval_scaling,
    eval_spec,
    in_sequence_set,
    maximal_self_stable,
    pretangent_space,
    project_family_to_subspace,
    scaling_from_dict,
    scaling_from_spec,
    scaling_to_dict,
    spec_from_dict,
    spec_to_dict,
    stability_graph,
    subsequence_push,
    tangency_probe,
    tilde_d,
)

F = Fraction

SUBLINEAR_ATOMS = ("one", "alt_one", "sqrt_r", "alt_sqrt_r",
                   "log_r", "alt_log_r")

SCALINGS = (
    GeometricScaling(F(2)),
    GeometricScaling(F(3, 2), F(5)),
    GeometricScaling(F(3), F(1, 2)),
    PolynomialScaling(1),
    PolynomialScaling(2, F(3)),
    PolynomialScaling(3, F(1, 4)),
)


def random_sublinear_terms(rng):
    terms = {}
    for atom in rng.sample(SUBLINEAR_ATOMS, rng.randint(0, 3)):
        c = F(rng.randint(-6, 6), rng.choice((1, 2, 3)))
        if c:
            terms[atom] = c
    return terms


def random_member(rng):
    """A spec whose normalized distance limit exists: linear part is a
    multiple of r_n or of (-1)**n * r_n, never a mix."""
    terms = random_sublinear_terms(rng)
    a = F(rng.randint(-5, 5), rng.choice((1, 2)))
    if a:
        terms[rng.choice(("r", "alt_r"))] = a
    return ClosedFormSpec(terms)


def random_nonmember(rng):
    """Mixing r and alt_r with positive weights splits the parity limits."""
    terms = random_sublinear_terms(rng)
    terms["r"] = F(rng.randint(1, 4))
    terms["alt_r"] = F(rng.randint(1, 4), rng.choice((1, 2)))
    return ClosedFormSpec(terms)


def random_zero(rng):
    return ClosedFormSpec(random_sublinear_terms(rng))


def perturb(spec, rng):
    """Same linear phase, different sublinear tail: rescaled distance 0."""
    terms = dict(spec.terms)
    extra = random_sublinear_terms(rng)
    for atom, c in extra.items():
        terms[atom] = terms.get(atom, F(0)) + c
    bumped = {k: v for k, v in terms.items() if v != 0}
    return ClosedFormSpec(bumped)


def law_corpus(seed, count):
    rng = random.Random(seed)
    for _ in range(count):
        scaling = rng.choice(SCALINGS)
        yield (
            scaling,
            random_member(rng),
            random_member(rng),
            random_member(rng),
            random_zero(rng),
            random_nonmember(rng),
            rng,
        )


# ---------------------------------------------------------------------------
# Core laws, exact on the whole corpus


def test_membership_iff_stable_against_zero_sequences():
    for scaling, x, _, _, z, w, _ in law_corpus(1101, 60):
        assert tilde_d(z, scaling).value == 0
        assert in_sequence_set(x, scaling)
        assert d_r(x, z, scaling).exists
        assert not in_sequence_set(w, scaling)
        assert not d_r(w, z, scaling).exists


def test_normalized_limit_equals_distance_to_zero_sequence():
    for scaling, x, y, _, z, _, _ in law_corpus(1102, 60):
        for member in (x, y):
            lhs = tilde_d(member, scaling)
            rhs = d_r(member, z, scaling)
            assert lhs.exists and rhs.exists
            assert lhs.value == rhs.value


def test_zero_distance_transfers_stability():
    checked = 0
    for scaling, x, y, _, _, _, rng in law_corpus(1103, 80):
        pair = d_r(x, y, scaling)
        if not pair.exists:
            continue
        t = perturb(x, rng)
        assert d_r(x, t, scaling).value == 0
        moved = d_r(y, t, scaling)
        assert moved.exists
        assert moved.value == pair.value
        checked += 1
    assert checked >= 50


def test_zero_distance_transfers_membership():
    for scaling, x, _, _, _, _, rng in law_corpus(1104, 60):
        t = perturb(x, rng)
        assert d_r(x, t, scaling).value == 0
        assert in_sequence_set(t, scaling)


def test_limsup_distance_is_a_pseudometric():
    for scaling, x, y, v, z, _, _ in law_corpus(1105, 60):
        pool = (x, y, v, z)
        for a in pool:
            assert d_up(a, a, scaling).value == 0
        for a, b in itertools.combinations(pool, 2):
            ab = d_up(a, b, scaling)
            assert ab.status == "exact"
            assert ab.value == d_up(b, a, scaling).value
            assert ab.value <= tilde_d(a, scaling).value \
                + tilde_d(b, scaling).value
        for a, b, c in itertools.permutations(pool, 3):
            assert d_up(a, c, scaling).value <= \
                d_up(a, b, scaling).value + d_up(b, c, scaling).value


def test_limsup_dominates_and_extends_the_limit():
    for scaling, x, y, _, _, w, _ in law_corpus(1106, 60):
        pair = d_r(x, y, scaling)
        if pair.exists:
            assert d_up(x, y, scaling).value == pair.value
        split = d_r(x, w, scaling)
        if split.status == "no_limit":
            values = [v for _, v in split.clusters]
            assert d_up(x, w, scaling).value == max(values)


# ---------------------------------------------------------------------------
# Spec evaluation sanity


def test_eval_matches_limit_for_rational_forms():
    scaling = GeometricScaling(F(2))
    spec = ClosedFormSpec({"r": F(7, 3), "one": F(-4)})
    for n in (1, 5, 30):
        assert eval_spec(spec, scaling, n) == F(7, 3) * F(2) ** n - 4
    deep = eval_spec(spec, scaling, 40) / eval_scaling(scaling, 40)
    assert abs(deep - tilde_d(spec, scaling).value) < F(1, 2) ** 30


def test_affine_spec_matches_closed_form():
    aff = AffineSpec(F(3, 2), "sqrt", F(2), "alternating")
    cf = ClosedFormSpec({"alt_r": F(3, 2), "alt_sqrt_r": F(2)})
    scaling = GeometricScaling(F(2))
    assert tilde_d(aff, scaling).value == tilde_d(cf, scaling).value
    assert d_r(aff, cf, scaling).value == 0


# ---------------------------------------------------------------------------
# Stability graph and maximal families


def brute_maximal_cliques(n, edge_set):
    cliques = []
    for r in range(1, n + 1):
        for sub in itertools.combinations(range(n), r):
            if all(tuple(sorted(p)) in edge_set
                   for p in itertools.combinations(sub, 2)):
                cliques.append(set(sub))
    return sorted(
        tuple(sorted(c)) for c in cliques
        if not any(c < other for other in cliques)
    )


def test_graph_edges_match_pairwise_limits():
    rng = random.Random(2203)
    for _ in range(25):
        scaling = rng.choice(SCALINGS)
        fam = {f"m{i}": random_member(rng) for i in range(rng.randint(2, 6))}
        g = stability_graph(fam, scaling)
        for i, j in itertools.combinations(range(len(g.labels)), 2):
            res = d_r(g.specs[i], g.specs[j], scaling)
            val = g.edge_value(g.labels[i], g.labels[j])
            if res.exists:
                assert val == res.value
            else:
                assert val is None


def test_maximal_families_match_subset_enumeration():
    rng = random.Random(2204)
    for _ in range(25):
        scaling = rng.choice(SCALINGS)
        fam = {f"m{i}": random_member(rng) for i in range(rng.randint(2, 7))}
        g = stability_graph(fam, scaling)
        edge_set = {pair for pair, _ in g.edges}
        want = brute_maximal_cliques(len(g.labels), edge_set)
        got = sorted(
            tuple(sorted(g.labels.index(l) for l in c))
            for c in maximal_self_stable(g)
        )
        assert got == want


def test_vanishing_members_sit_in_every_maximal_family():
    rng = random.Random(2205)
    for _ in range(20):
        scaling = rng.choice(SCALINGS)
        fam = {f"m{i}": random_member(rng) for i in range(4)}
        fam["z0"] = random_zero(rng)
        fam["z1"] = random_zero(rng)
        g = stability_graph(fam, scaling)
        for clique in maximal_self_stable(g):
            assert "z0" in clique and "z1" in clique


def test_graph_rejects_members_without_limits():
    rng = random.Random(2206)
    fam = {"ok": random_member(rng), "bad": random_nonmember(rng)}
    with pytest.raises(InputError):
        stability_graph(fam, GeometricScaling(F(2)))


# ---------------------------------------------------------------------------
# Pretangent spaces


def four_point_family():
    return [(lbl, ClosedFormSpec({"r": c})) for lbl, c in
            (("x0", F(0)), ("xh", F(1, 2)), ("x1", F(1)), ("x2", F(2)))]


def test_four_point_pretangent_table():
    g = stability_graph(four_point_family(), GeometricScaling(F(2)))
    cliques = maximal_self_stable(g)
    assert cliques == (("x0", "xh", "x1", "x2"),)
    rep = pretangent_space(g, cliques[0])
    pts = {F(0): "x0", F(1, 2): "xh", F(1): "x1", F(2): "x2"}
    for a, ca in pts.items():
        for b, cb in pts.items():
            assert rep.space.space.d(ca, cb) == abs(a - b)
    assert rep.distinguished == "x0"
    assert dict(rep.member_blocks)["x0"] == "x0"


def test_pretangent_identifies_zero_distance_members():
    scaling = GeometricScaling(F(2))
    fam = [
        ("a", ClosedFormSpec({"r": F(1)})),
        ("b", ClosedFormSpec({"r": F(1), "log_r": F(5)})),
        ("c", ClosedFormSpec({"r": F(3)})),
    ]
    g = stability_graph(fam, scaling)
    rep = pretangent_space(g, ("a", "b", "c"))
    blocks = dict(rep.member_blocks)
    assert blocks["a"] == blocks["b"] != blocks["c"]
    assert len(rep.space.space) == 2


def test_pretangent_requires_a_clique():
    scaling = GeometricScaling(F(2))
    fam = {
        "p": ClosedFormSpec({"r": F(1)}),
        "q": ClosedFormSpec({"alt_r": F(1)}),
        "z": ClosedFormSpec({}),
    }
    g = stability_graph(fam, scaling)
    # p and q split by parity: |1-(-1)| odd vs |1-1| even
    assert g.edge_value("p", "q") is None
    with pytest.raises(InputError):
        pretangent_space(g, ("p", "q"))


# ---------------------------------------------------------------------------
# Subsequence pushes


def test_push_preserves_existing_limits():
    rng = random.Random(3301)
    for _ in range(20):
        scaling = rng.choice(SCALINGS)
        fam = {f"m{i}": random_member(rng) for i in range(4)}
        for stride, offset in ((2, 0), (2, 1), (3, 1), (1, 4)):
            report = subsequence_push(fam, scaling, stride, offset)
            for kind, labels, before, after in report.checks:
                if before.exists:
                    assert after.exists and after.value == before.value


def test_push_folds_alternation_on_even_strides():
    spec = ClosedFormSpec({"alt_r": F(3), "alt_one": F(1)})
    fam = {"a": spec}
    scaling = GeometricScaling(F(2))
    even = subsequence_push(fam, scaling, 2, 0).pushed("a")
    assert dict(even.terms) == {"r": F(3), "one": F(1)}
    odd_start = subsequence_push(fam, scaling, 2, 1).pushed("a")
    assert dict(odd_start.terms) == {"r": F(-3), "one": F(-1)}
    surviving = subsequence_push(fam, scaling, 3, 0).pushed("a")
    assert dict(surviving.terms) == {"alt_r": F(3), "alt_one": F(1)}


def test_push_resolves_parity_split_limits():
    # a sequence without a limit gains one along either parity class
    spec = ClosedFormSpec({"r": F(2), "alt_r": F(1)})
    fam = {"w": spec}
    scaling = GeometricScaling(F(2))
    base = tilde_d(spec, scaling)
    assert base.status == "no_limit"
    clusters = dict(base.clusters)
    even = subsequence_push(fam, scaling, 2, 0)
    assert tilde_d(even.pushed("w"), even.scaling).value == clusters["even"]
    odd = subsequence_push(fam, scaling, 2, 1)
    assert tilde_d(odd.pushed("w"), odd.scaling).value == clusters["odd"]


def test_push_selects_inset_anchors():
    lat = Lattice(F(1), F(0))
    spec = InSetSpec(lat, F(1), F(3))
    fam = {"s": spec}
    scaling = GeometricScaling(F(2))
    even = subsequence_push(fam, scaling, 2, 0).pushed("s")
    assert (even.a, even.a_odd) == (F(1), F(1)) or even.a_odd is None
    shifted = subsequence_push(fam, scaling, 2, 1).pushed("s")
    assert shifted.anchors() == (F(3), F(3))
    flipped = subsequence_push(fam, scaling, 3, 1).pushed("s")
    assert flipped.anchors() == (F(3), F(1))


def test_pushed_scaling_reindexes():
    scaling = GeometricScaling(F(2), F(1))
    pushed = SubsequenceScaling(scaling, 3, 1)
    for k in (1, 2, 5):
        assert pushed.eval(k) == F(2) ** (3 * k + 1)


# ---------------------------------------------------------------------------
# Tangency probe


def test_probe_finds_extensions_along_parity_maps():
    scaling = GeometricScaling(F(2))
    fam = {
        "x0": ClosedFormSpec({}),
        "xa": ClosedFormSpec({"alt_r": F(1)}),
    }
    g = stability_graph(fam, scaling)
    clique = maximal_self_stable(g)[0]
    assert clique == ("x0", "xa")
    pool = {
        "plus": ClosedFormSpec({"r": F(1)}),
        "minus": ClosedFormSpec({"r": F(-1)}),
    }
    outcomes = tangency_probe(g, clique, ((2, 0), (2, 1)), pool)
    by_map = {(o.stride, o.offset): o for o in outcomes}
    # along even indices xa looks like +r_n, so -r_n extends the family;
    # along odd indices the roles swap
    assert by_map[(2, 0)].status == "extension_witness"
    assert by_map[(2, 0)].witness == "minus"
    assert by_map[(2, 1)].status == "extension_witness"
    assert by_map[(2, 1)].witness == "plus"


def test_probe_reports_empty_search_honestly():
    scaling = GeometricScaling(F(2))
    fam = {"x0": ClosedFormSpec({}), "x1": ClosedFormSpec({"r": F(1)})}
    g = stability_graph(fam, scaling)
    clique = maximal_self_stable(g)[0]
    pool = {"dup": ClosedFormSpec({"r": F(1), "one": F(9)})}
    (outcome,) = tangency_probe(g, clique, ((2, 0),), pool)
    assert outcome.status == "no_extension_found"
    assert "collapses" in outcome.detail


def test_probe_pushes_alternating_candidates():
    # the candidate rides the same index map as the family: along even
    # indices (-1)^n r_n collapses onto +r_n, along odd indices it lands
    # at -r_n and genuinely extends
    scaling = GeometricScaling(F(2))
    fam = {"x0": ClosedFormSpec({}), "x1": ClosedFormSpec({"r": F(1)})}
    g = stability_graph(fam, scaling)
    clique = maximal_self_stable(g)[0]
    pool = {"alt": ClosedFormSpec({"alt_r": F(1)})}
    outcomes = tangency_probe(g, clique, ((2, 0), (2, 1)), pool)
    by_map = {(o.stride, o.offset): o for o in outcomes}
    assert by_map[(2, 0)].status == "no_extension_found"
    assert "collapses" in by_map[(2, 0)].detail
    assert by_map[(2, 1)].status == "extension_witness"
    assert by_map[(2, 1)].witness == "alt"


# ---------------------------------------------------------------------------
# Projection onto subspaces


def test_projection_onto_full_line_is_free():
    from farfield import FullLine

    scaling = GeometricScaling(F(2))
    fam = {"a": ClosedFormSpec({"r": F(5, 3)}),
           "b": ClosedFormSpec({"r": F(-2), "sqrt_r": F(1)})}
    entries = project_family_to_subspace(fam, scaling, FullLine())
    for e in entries:
        assert e.residual.value == 0
        assert not e.moved


def test_projection_onto_lattice_costs_nothing():
    scaling = GeometricScaling(F(2))
    fam = {"a": ClosedFormSpec({"r": F(7, 5)})}
    (entry,) = project_family_to_subspace(fam, scaling, Lattice(F(1), F(0)))
    assert entry.residual.value == 0


def test_projection_onto_sparse_points_pays_the_gap():
    # anchor 3/2 sits mid-gap between powers of two: both neighbors are
    # (1/2)*2**n away, so the rescaled residual is exactly 1/2
    scaling = GeometricScaling(F(2))
    fam = {"mid": ClosedFormSpec({"r": F(3, 2)})}
    (entry,) = project_family_to_subspace(
        fam, scaling, GeometricPoints(F(2), F(1), 0))
    assert entry.residual.value == F(1, 2)
    assert entry.moved


# ---------------------------------------------------------------------------
# Derived scalings and serialization


def test_scaling_from_spec_roundtrip():
    base = GeometricScaling(F(2))
    spec = ClosedFormSpec({"r": F(3)})
    derived = scaling_from_spec(spec, base)
    for n in (1, 4, 9):
        assert derived.eval(n) == 3 * F(2) ** n
    with pytest.raises(InputError):
        scaling_from_spec(ClosedFormSpec({"one": F(1)}), base)


def test_serialization_roundtrips():
    scalings = [
        GeometricScaling(F(5, 2), F(3)),
        PolynomialScaling(2, F(1, 2)),
        SubsequenceScaling(GeometricScaling(F(2)), 3, 1),
    ]
    for s in scalings:
        assert scaling_from_dict(scaling_to_dict(s)) == s
    specs = [
        AffineSpec(F(1, 2), "log", F(-3), "alternating"),
        ClosedFormSpec({"r": F(1), "alt_one": F(2)}),
        InSetSpec(Lattice(F(1), F(0)), F(1), F(3)),
        InSetSpec(GeometricPoints(F(2), F(1), 0), F(5, 2)),
    ]
    for sp in specs:
        assert spec_from_dict(spec_to_dict(sp)) == sp
