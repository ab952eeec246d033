import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from printed_facets import (
    FACET17_AS_PRINTED,
    all_rows,
    correlation14_as_printed,
    correlator_rows,
    parse,
)

from bellpoly.facets import (
    BellInequality,
    CorrelatorForm,
    SymmetryOp,
    behavior_from_correlators,
    build_catalog,
    classify,
    correlators_from_behavior,
    evaluate,
    from_correlator_form,
    generalized_facet,
    group_order,
    is_positivity,
    load_catalog,
    named_inequality,
    orbit,
    poly,
    symmetry_group,
    to_correlator_form,
)
from bellpoly.polytope import VPolytope, verify_facet
from bellpoly.scenario import Behavior, BellScenario, enumerate_strategies, enumerate_vertices

F = Fraction
A1, A2 = poly.var(0, 0), poly.var(0, 1)
B1, B2 = poly.var(1, 0), poly.var(1, 1)
C1 = poly.var(2, 0)


def form(p, bound, scenario=BellScenario((2, 2, 1))):
    return from_correlator_form(CorrelatorForm.from_poly(scenario, p, bound))


def printed_four():
    """The four nontrivial inequalities in CHSH-like form, indices starting at 1."""
    x = A2 * B2 - A2 * B1 - A1 * B2 - A1 * B1
    return [
        form(x + x * C1 - 2 * C1, 2),
        form(-x - x * C1 - 2 * C1, 2),
        form(x - x * C1 + 2 * C1, 2),
        form(-x + x * C1 + 2 * C1, 2),
    ]


# --- catalog identity ---------------------------------------------------------------


def test_printed_list_equals_catalog(s221, catalog221):
    printed = {BellInequality.from_terms(s221, *parse(r)) for r in all_rows()}
    assert len(printed) == 48
    assert printed == set(catalog221.facets)


def test_facet17_as_printed_is_invalid(s221):
    ineq = BellInequality.from_terms(s221, *parse(FACET17_AS_PRINTED))
    vp = VPolytope(tuple(v.coordinates for v in enumerate_vertices(s221)))
    assert not verify_facet(ineq.halfspace, vp).valid


def test_printed_correlator_forms(s221, catalog221):
    facets = set(catalog221.facets)
    got = {k: form(p, b) for k, (p, b) in correlator_rows().items()}
    assert all(g in facets for g in got.values())
    assert len(set(got.values())) == 16
    nontrivial = {f for f in facets if not is_positivity(f)}
    assert set(got.values()) == nontrivial
    assert form(*correlation14_as_printed()) not in facets


def test_correlation9_matches_facet9(s221):
    facet9 = BellInequality.from_terms(s221, *parse(all_rows()[32]))
    p, b = correlator_rows()[9]
    assert form(p, b) == facet9
    cf = to_correlator_form(facet9).integer_folded()
    expected = CorrelatorForm.from_poly(s221, p, b).integer_folded()
    assert cf == expected


def test_four_printed_forms_one_orbit(catalog221):
    (cls,) = catalog221.nontrivial_classes
    four = printed_four()
    assert len(set(four)) == 4
    assert all(f in cls.members for f in four)


def test_index_interchange_maps_first_to_second(s221):
    # A1 -> A2, A2 -> -A1, B1 -> B2, B2 -> -B1
    op = SymmetryOp((0, 1, 2), ((1, 0), (1, 0), (0,)), ((False, True), (False, True), (False,)))
    first, second = printed_four()[:2]
    assert op.apply(first) == second


def test_class_representative_is_lex_min(catalog221):
    (cls,) = catalog221.nontrivial_classes
    assert cls.representative == min(cls.members, key=BellInequality.sort_key)
    assert cls.orbit_size == 16


# --- evaluation and conversion -----------------------------------------------------


def test_positivity_facet_nonnegative(s221):
    pos = form(-(1 + A1) * (1 + B1) * (1 + C1), 0)
    assert is_positivity(pos)
    rng = random.Random(0)
    verts = enumerate_vertices(s221)
    for _ in range(10):
        w = [F(rng.randint(0, 4)) for _ in verts]
        t = sum(w) or F(1)
        b = Behavior(s221, tuple(sum(wi * v.coordinates[k] for wi, v in zip(w, verts)) / t for k in range(17)))
        assert evaluate(pos, b) <= 0


def test_facet9_on_all_zero_vertex(s221):
    facet9 = BellInequality.from_terms(s221, *parse(all_rows()[32]))
    v = next(enumerate_strategies(s221)).behavior()
    # 1 - 1 - 1 - 1 + 1 + 1 - 1 = -1
    assert evaluate(facet9, v) == -1 <= facet9.bound


def test_chsh_on_pr_box():
    s = BellScenario((2, 2))
    corr = {k: 0 for k in s.terms}
    for x in range(2):
        for y in range(2):
            corr[((0, x), (1, y))] = -1 if (x, y) == (1, 1) else 1
    corr[()] = 1
    assert named_inequality("CHSH").value(corr) == 4


def test_marginal_bound_in_correlators():
    s = BellScenario((2, 2))
    ineq = BellInequality.from_terms(s, {((0, 0),): 1}, 1)
    cf = to_correlator_form(ineq).folded()
    assert cf.as_dict() == {((0, 0),): F(1, 2)} and cf.bound == F(1, 2)
    assert cf.integer_folded().bound == 1


def test_is_positivity_examples(s221, catalog221):
    assert sum(is_positivity(f) for f in catalog221.facets) == 32
    assert not is_positivity(form(A1, 1, BellScenario((2, 2, 1))))
    assert not is_positivity(from_correlator_form(named_inequality("CHSH")))


def test_round_trip_every_catalog_facet(catalog221):
    for f in catalog221.facets:
        assert from_correlator_form(to_correlator_form(f)) == f


def test_exact_round_trip_random_behaviors(s221, catalog221):
    rng = random.Random(7)
    for _ in range(1000):
        coords = tuple(F(rng.randint(0, 12), rng.randint(1, 12)) for _ in range(17))
        b = Behavior(s221, coords)
        corr = correlators_from_behavior(b)
        assert behavior_from_correlators(s221, corr) == b
        f = catalog221.facets[rng.randrange(48)]
        assert evaluate(f, b) == to_correlator_form(f).value(corr)


# --- symmetries -----------------------------------------------------------------


def test_generator_count_and_order(s221):
    assert len(symmetry_group(s221)) == 8
    assert group_order(s221) == 256
    assert group_order(BellScenario((2, 2))) == 2**4 * 2 * 2 * 2


def test_group_order_matches_orbit_of_generic_form(s221):
    # a form with distinct coefficients everywhere has a free orbit (up to the
    # stabilizer), so its orbit size is the group order
    cf = CorrelatorForm(s221, tuple((k, F(i + 3) ** 2) for i, k in enumerate(s221.terms)), 10**6)
    f = from_correlator_form(cf)
    assert len(orbit(f, symmetry_group(s221))) == 256


def test_identity_fixes_catalog(s221, catalog221):
    ident = SymmetryOp.identity(s221)
    assert all(ident.apply(f) == f for f in catalog221.facets)


def test_generators_permute_catalog(s221, catalog221):
    facets = set(catalog221.facets)
    for g in symmetry_group(s221):
        assert {g.apply(f) for f in facets} == facets


def _random_op(scenario, rng):
    gens = symmetry_group(scenario)
    op = SymmetryOp.identity(scenario)
    for _ in range(rng.randint(0, 6)):
        op = rng.choice(gens).compose(op)
    return op


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_compose_and_inverse(seed):
    s = BellScenario((2, 2, 1))
    rng = random.Random(seed)
    a, b = _random_op(s, rng), _random_op(s, rng)
    f = printed_four()[0]
    assert a.compose(b).apply(f) == a.apply(b.apply(f))
    assert a.inverse().apply(a.apply(f)) == f
    assert a.compose(a.inverse()) == SymmetryOp.identity(s)


def test_party_permutation_must_respect_settings(s221):
    bad = SymmetryOp((2, 1, 0), ((0,), (0, 1), (0, 1)), ((False,), (False, False), (False, False)))
    with pytest.raises(ValueError):
        bad.check(s221)


def test_classify_counts(catalog221, catalog2211):
    assert [len(c.members) for c in catalog221.classes if not c.positivity] == [16]
    assert catalog221.positivity_count == 32
    assert [len(c.members) for c in catalog2211.classes if not c.positivity] == [32]
    assert catalog2211.positivity_count == 64


def test_classify_order_invariant(catalog221):
    facets = list(catalog221.facets)
    random.Random(1).shuffle(facets)
    a = classify(facets)
    b = classify(list(catalog221.facets))
    assert [(c.representative, c.members) for c in a] == [(c.representative, c.members) for c in b]


def test_classify_rejects_mixed_scenarios(catalog221):
    other = from_correlator_form(named_inequality("CHSH"))
    with pytest.raises(ValueError):
        classify([catalog221.facets[0], other])


def test_role_suborbits(catalog221):
    nontrivial = [c for c in catalog221.role_classes if not c.positivity]
    assert sum(len(c.members) for c in nontrivial) == 16


# --- named and generalized inequalities ---------------------------------------------


def test_generalized_facet_three_parties_is_i3():
    g = generalized_facet(3)
    i3 = named_inequality("I3")
    assert g.as_dict() == i3.as_dict() and g.bound == i3.bound == 2


@pytest.mark.parametrize("n", [3, 4, 5])
def test_generalized_facet_in_nontrivial_orbit(n, catalog221, catalog2211):
    if n == 3:
        cat = catalog221
    elif n == 4:
        cat = catalog2211
    else:
        cat = build_catalog(BellScenario.minimal(5))
    (cls,) = cat.nontrivial_classes
    assert from_correlator_form(generalized_facet(n)) in cls.members


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_generalized_facet_tight_on_strategies(n):
    g = generalized_facet(n)
    s = BellScenario.minimal(n)
    values = []
    for strat in enumerate_strategies(s):
        corr = correlators_from_behavior(strat.behavior())
        values.append(g.value(corr))
    assert max(values) == g.bound


def test_generalized_facet_n4_expansion():
    D1 = poly.var(3, 0)
    p = (-2 + A1 * (B1 + B2) + A2 * (B1 - B2)) * (1 + C1) * (1 + D1)
    expected = CorrelatorForm.from_poly(BellScenario.minimal(4), p, 0).folded()
    assert generalized_facet(4) == expected


def test_generalized_facet_needs_three():
    with pytest.raises(ValueError):
        generalized_facet(2)


def test_named_inequalities():
    assert named_inequality("i3").bound == 2
    mermin = named_inequality("Mermin")
    assert len(mermin.terms) == 4 and mermin.bound == 2
    assert all(len(k) == 3 for k, _ in mermin.terms)
    sv = named_inequality("Svetlichny")
    assert len(sv.terms) == 8 and sv.bound == 4
    i1 = named_inequality("I1")
    assert i1.scenario.settings == (1, 2, 2)
    assert named_inequality("I2").scenario.settings == (2, 1, 2)
    with pytest.raises(KeyError):
        named_inequality("foo")


@pytest.mark.parametrize("name", ["I1", "I2", "I3", "CHSH", "Mermin", "Svetlichny"])
def test_named_bounds_are_local_maxima(name):
    cf = named_inequality(name)
    vals = [cf.value(correlators_from_behavior(s.behavior())) for s in enumerate_strategies(cf.scenario)]
    assert max(vals) == cf.bound


@pytest.mark.parametrize("name", ["I1", "I2"])
def test_i1_i2_are_facets(name):
    cf = named_inequality(name)
    vp = VPolytope(tuple(v.coordinates for v in enumerate_vertices(cf.scenario)))
    assert verify_facet(from_correlator_form(cf).halfspace, vp).is_facet


# --- catalog files -------------------------------------------------------------------


def test_catalog_json_byte_stable(s221, catalog221):
    assert build_catalog(s221).to_json() == catalog221.to_json()


def test_catalog_json_fields_and_load(catalog221):
    text = catalog221.to_json()
    doc = json.loads(text)
    assert doc["version"] == 1 and doc["scenario"] == [2, 2, 1]
    assert doc["dimension"] == 17 and doc["vertex_count"] == 32 and len(doc["facets"]) == 48
    entry = doc["facets"][0]
    for key in ("prob_coeffs", "bound", "correlator_terms", "positivity", "class_id", "class_size"):
        assert key in entry
    assert sum(e["positivity"] for e in doc["facets"]) == 32
    scenario, facets, _ = load_catalog(text)
    assert scenario == catalog221.scenario and facets == list(catalog221.facets)


def test_catalog_correlator_terms_are_consistent(catalog221):
    doc = json.loads(catalog221.to_json())
    s = catalog221.scenario
    for entry, f in zip(doc["facets"], catalog221.facets):
        terms = {tuple(zip(t["parties"], t["settings"])): t["coeff"] for t in entry["correlator_terms"]}
        cf = CorrelatorForm(s, tuple(terms.items()), entry["correlator_bound"])
        assert from_correlator_form(cf) == f


def test_catalog_version_required(catalog221):
    doc = json.loads(catalog221.to_json())
    del doc["version"]
    with pytest.raises(ValueError):
        load_catalog(json.dumps(doc))
    doc["version"] = 2
    with pytest.raises(ValueError):
        load_catalog(json.dumps(doc))


def test_summary(catalog221):
    assert catalog221.summary() == "dim=17 vertices=32 facets=48 positivity=32 classes=1x16"


def test_poly_rejects_repeated_party():
    with pytest.raises(ValueError):
        A1 * A2


def test_correlator_form_text():
    assert str(named_inequality("I3")).startswith("-2*C0 + A0B0")
    assert str(named_inequality("Mermin")) == "A0B0C1 + A0B1C0 + A1B0C0 - A1B1C1 <= 2"
