from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellpoly.facets import from_correlator_form, named_inequality
from bellpoly.polytope import Halfspace, VPolytope, affine_dim, canonicalize, dd_convert, verify_facet
from bellpoly.scenario import BellScenario, CapacityError, enumerate_vertices

F = Fraction
SQUARE = VPolytope(((0, 0), (1, 0), (0, 1), (1, 1)))


def vpoly(scenario):
    return VPolytope(tuple(v.coordinates for v in enumerate_vertices(scenario)))


def test_unit_square():
    hp = dd_convert(SQUARE)
    expected = {Halfspace((-1, 0), 0), Halfspace((0, -1), 0), Halfspace((1, 0), 1), Halfspace((0, 1), 1)}
    assert set(hp.halfspaces) == expected
    assert hp.equations == ()


@pytest.mark.parametrize(
    "h,expected",
    [
        (Halfspace((F(1, 2), F(1, 2)), 1), Halfspace((1, 1), 2)),
        (Halfspace((2, -4), 6), Halfspace((1, -2), 3)),
        (Halfspace((1, -2), 3), Halfspace((1, -2), 3)),
    ],
)
def test_canonicalize(h, expected):
    assert canonicalize(h) == expected
    assert canonicalize(canonicalize(h)) == expected


def test_zero_normal_rejected():
    with pytest.raises(ValueError):
        Halfspace((0, 0), 1)


def test_empty_and_ragged_input():
    with pytest.raises(ValueError):
        VPolytope(())
    with pytest.raises(ValueError):
        VPolytope(((0, 0), (1,)))


def test_verify_facet_square():
    assert verify_facet(Halfspace((1, 0), 1), SQUARE).is_facet
    both = Halfspace((1, 1), 2)  # sum of x <= 1 and y <= 1
    check = verify_facet(both, SQUARE)
    assert check.valid and not check.is_facet and check.saturating_vertex_count == 1
    assert not verify_facet(Halfspace((1, 0), 0), SQUARE).valid
    with pytest.raises(ValueError):
        verify_facet(Halfspace((1, 0, 0), 1), SQUARE)


def test_chsh_is_facet():
    chsh = from_correlator_form(named_inequality("CHSH"))
    check = verify_facet(chsh.halfspace, vpoly(BellScenario((2, 2))))
    assert check.valid and check.is_facet


def test_first_nontrivial_inequality_is_facet(s221):
    ineq = from_correlator_form(named_inequality("I3"))
    vp = vpoly(s221)
    check = verify_facet(ineq.halfspace, vp)
    assert check.valid and check.is_facet
    tight = [v for v in vp.vertices if ineq.halfspace.slack(v) == 0]
    assert affine_dim(tight) == 16


def test_affine_dim():
    assert affine_dim([(F(1, 3), 2)]) == 0
    assert affine_dim([(0, 0), (1, 1), (2, 2)]) == 1
    assert affine_dim(vpoly(BellScenario((2, 2, 1))).vertices) == 17
    assert affine_dim(vpoly(BellScenario((2, 2, 1, 1, 1))).vertices) == 71


@pytest.mark.parametrize("settings,count", [((2, 2), 24), ((2, 2, 1), 48), ((2, 2, 1, 1), 96)])
def test_round_trip_soundness(settings, count):
    vp = vpoly(BellScenario(settings))
    hp = dd_convert(vp)
    assert len(hp) == count
    dim = affine_dim(vp.vertices)
    for h in hp:
        check = verify_facet(h, vp)
        assert check.valid and check.is_facet
        assert all(isinstance(c, int) for c in h.coefficients) and isinstance(h.bound, int)
    for v in vp.vertices:
        assert sum(1 for h in hp if h.slack(v) == 0) >= dim


def test_ray_cap():
    with pytest.raises(CapacityError):
        dd_convert(vpoly(BellScenario((2, 2, 1))), ray_cap=20)


def test_lower_dimensional_input():
    # unit square lifted into the plane z = x + y in R^3
    pts = [(x, y, x + y) for x, y in ((0, 0), (1, 0), (0, 1), (1, 1))]
    hp = dd_convert(VPolytope(tuple(pts)))
    assert len(hp) == 4
    assert len(hp.equations) == 1 and len(hp.coordinates) == 2
    eq = hp.equations[0]
    assert all(eq.lhs(p) == eq.bound for p in pts)
    assert all(h.contains([p[c] for c in hp.coordinates]) for h in hp for p in pts)


def test_single_point_and_segment():
    assert len(dd_convert(VPolytope(((1, 2),)))) == 0
    seg = dd_convert(VPolytope(((0, 0), (2, 2))))
    assert len(seg) == 2 and len(seg.equations) == 1


def _brute_force_facets(points):
    """All supporting planes through affinely independent point triples (3-d input)."""
    out = set()
    pts = [tuple(F(c) for c in p) for p in set(points)]
    for a, b, c in combinations(pts, 3):
        u = [b[i] - a[i] for i in range(3)]
        w = [c[i] - a[i] for i in range(3)]
        n = (u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0])
        if not any(n):
            continue
        for sign in (1, -1):
            h = Halfspace(tuple(sign * x for x in n), sign * sum(n[i] * a[i] for i in range(3)))
            if all(h.contains(p) for p in pts):
                out.add(canonicalize(h))
    return out


points3 = st.lists(st.tuples(*[st.integers(-2, 2)] * 3), min_size=4, max_size=12, unique=True)


@settings(max_examples=60, deadline=None)
@given(points3)
def test_matches_brute_force(points):
    if affine_dim(points) < 3:
        return
    assert set(dd_convert(VPolytope(tuple(points))).halfspaces) == _brute_force_facets(points)


@settings(max_examples=30, deadline=None)
@given(st.permutations(list(range(16))))
def test_insertion_order_independent(perm):
    verts = vpoly(BellScenario((2, 2))).vertices
    shuffled = VPolytope(tuple(verts[i] for i in perm))
    ref = dd_convert(VPolytope(verts)).halfspaces
    assert dd_convert(shuffled, sort_vertices=False).halfspaces == ref


@settings(max_examples=5, deadline=None)
@given(st.permutations(list(range(32))))
def test_insertion_order_independent_221(perm):
    verts = vpoly(BellScenario((2, 2, 1))).vertices
    shuffled = VPolytope(tuple(verts[i] for i in perm))
    assert dd_convert(shuffled, sort_vertices=False).halfspaces == dd_convert(VPolytope(verts)).halfspaces


def test_stats_reported():
    hp = dd_convert(vpoly(BellScenario((2, 2, 1))))
    assert hp.stats["facets"] == 48 and hp.stats["peak_rays"] >= 48
