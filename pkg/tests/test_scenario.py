from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellpoly.polytope import affine_dim
from bellpoly.scenario import (
    BellScenario,
    CapacityError,
    NormalizationError,
    SignalingError,
    check_no_signaling,
    deterministic_joint,
    dimension,
    enumerate_strategies,
    enumerate_vertices,
    project_to_parametrization,
    uniform_joint,
)

scenarios = st.lists(st.integers(1, 2), min_size=2, max_size=4).map(lambda s: BellScenario(tuple(s)))


@pytest.mark.parametrize(
    "settings,dim,verts",
    [((2, 2, 1), 17, 32), ((2, 2, 1, 1), 35, 64), ((2, 2), 8, 16), ((2, 2, 1, 1, 1), 71, 128), ((1, 1), 3, 4)],
)
def test_dimension_and_vertex_count(settings, dim, verts):
    s = BellScenario(settings)
    assert dimension(s) == dim
    assert len(enumerate_vertices(s)) == verts


def test_parametrization_order_221(s221):
    expected = (
        "P(a0) P(a1) P(b0) P(b1) P(c0) P(a0b0) P(a0b1) P(a1b0) P(a1b1) P(a0c0) P(a1c0) "
        "P(b0c0) P(b1c0) P(a0b0c0) P(a0b1c0) P(a1b0c0) P(a1b1c0)"
    ).split()
    assert s221.labels() == expected


def test_parse_and_str():
    s = BellScenario.parse("2,2,1")
    assert s.settings == (2, 2, 1)
    assert str(s) == "2,2,1"
    assert BellScenario.minimal(4).settings == (2, 2, 1, 1)
    assert s.is_minimal and BellScenario((1, 2, 2)).is_minimal
    assert not BellScenario((2, 2, 2)).is_minimal


@pytest.mark.parametrize("bad", [(2,), (2, 0), (), (2, -1)])
def test_invalid_scenarios(bad):
    with pytest.raises(ValueError):
        BellScenario(bad)


@pytest.mark.parametrize("text", ["2,x", "", "2;2"])
def test_parse_rejects_garbage(text):
    with pytest.raises(ValueError):
        BellScenario.parse(text)


def test_vertex_cap():
    with pytest.raises(CapacityError):
        enumerate_vertices(BellScenario((2, 2, 1)), cap=31)


def test_vertices_sorted_without_duplicates(s221):
    verts = [v.coordinates for v in enumerate_vertices(s221)]
    assert len(set(verts)) == len(verts)
    outcomes = [s.outcomes for s in enumerate_strategies(s221)]
    assert outcomes == sorted(outcomes)


@settings(max_examples=25, deadline=None)
@given(scenarios)
def test_invariants(s):
    assert len(s.terms) == s.dimension
    verts = enumerate_vertices(s)
    assert len(verts) == 2 ** sum(s.settings)
    for v in verts:
        assert set(v.coordinates) <= {0, 1}
        assert v.is_monotone()
    # homogenized vertices (1, v) carry dimension + 1 coordinates and span them
    assert affine_dim([v.coordinates for v in verts]) == s.dimension


@settings(max_examples=10, deadline=None)
@given(scenarios)
def test_deterministic_joints_are_no_signaling(s):
    for strat in list(enumerate_strategies(s))[:8]:
        assert check_no_signaling(deterministic_joint(strat), s)
        assert project_to_parametrization(deterministic_joint(strat), s) == strat.behavior()


def test_uniform_projection(s221):
    b = project_to_parametrization(uniform_joint(s221), s221)
    for term, value in zip(s221.terms, b.coordinates):
        assert value == Fraction(1, 2 ** len(term))
    assert check_no_signaling(uniform_joint(s221))


def test_all_zero_and_all_one_strategies(s221):
    strategies = list(enumerate_strategies(s221))
    assert set(strategies[0].behavior().coordinates) == {1}
    assert set(strategies[-1].behavior().coordinates) == {0}


def _signaling_joint():
    # Alice outputs Bob's setting
    s = BellScenario((2, 2))
    joint = {}
    for xs in s.setting_tuples:
        for a in s.outcome_tuples:
            joint[(a, xs)] = Fraction(1, 2) if a[0] == xs[1] else Fraction(0)
    return s, joint


def test_signaling_detected():
    s, joint = _signaling_joint()
    report = check_no_signaling(joint, s)
    assert not report
    v = report.violations[0]
    assert v.parties == (0,)
    assert v.other_settings != v.other_settings_alt
    assert any(v.parties == (0,) and v.difference != 0 for v in report.violations)
    with pytest.raises(SignalingError):
        project_to_parametrization(joint, s)


def test_normalization_error_names_the_settings():
    s = BellScenario((2, 2))
    joint = uniform_joint(s)
    joint[((0, 0), (1, 0))] = Fraction(1, 2)
    with pytest.raises(NormalizationError, match=r"\(1, 0\)"):
        check_no_signaling(joint, s)


def test_behavior_length_checked(s221):
    from bellpoly.scenario import Behavior

    with pytest.raises(ValueError):
        Behavior(s221, (0,) * 16)


def test_random_local_mixtures_are_monotone(s221):
    import random

    rng = random.Random(3)
    verts = enumerate_vertices(s221)
    for _ in range(20):
        w = [Fraction(rng.randint(0, 5)) for _ in verts]
        total = sum(w) or Fraction(1)
        coords = [sum(wi * v.coordinates[k] for wi, v in zip(w, verts)) / total for k in range(s221.dimension)]
        from bellpoly.scenario import Behavior

        b = Behavior(s221, tuple(coords))
        assert b.in_unit_cube() and b.is_monotone()


def test_outcome_and_setting_tuples(s221):
    assert len(s221.setting_tuples) == 4
    assert s221.outcome_tuples == tuple(product((0, 1), repeat=3))
