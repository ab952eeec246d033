"""Exact vertex-to-halfspace conversion by the double description method.

A polytope given by vertices ``v`` is homogenized to the cone generated by
``(1, v)``.  Its facets are the extreme rays of the dual cone
``{h : h . (1, v) >= 0 for every vertex}``, which is built by inserting one
vertex constraint at a time starting from a simplicial cone.  Adjacency of
rays is decided combinatorially from their sets of tight constraints.
All arithmetic is on Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import affine_rank, independent_rows, integer_row, inverse, pivot_columns, primitive
from .scenario import CapacityError

__all__ = [
    "DEFAULT_RAY_CAP",
    "FacetCheck",
    "HPolytope",
    "Halfspace",
    "VPolytope",
    "affine_dim",
    "canonicalize",
    "dd_convert",
    "verify_facet",
]

DEFAULT_RAY_CAP = 10**6


@dataclass(frozen=True, order=True)
class Halfspace:
    """The halfspace ``coefficients . x <= bound``."""

    coefficients: tuple
    bound: object

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        if not any(self.coefficients):
            raise ValueError("halfspace normal must be nonzero")

    @property
    def dimension(self) -> int:
        return len(self.coefficients)

    def lhs(self, point: Sequence) -> object:
        return sum(c * x for c, x in zip(self.coefficients, point) if c)

    def slack(self, point: Sequence) -> object:
        """``bound - coefficients . point``; nonnegative iff the point satisfies it."""
        return self.bound - self.lhs(point)

    def contains(self, point: Sequence) -> bool:
        return self.slack(point) >= 0


def canonicalize(h: Halfspace) -> Halfspace:
    """Clear denominators and divide by the gcd; idempotent.

    >>> canonicalize(Halfspace((Fraction(1, 2), Fraction(1, 2)), 1))
    Halfspace(coefficients=(1, 1), bound=2)
    """
    if not any(h.coefficients):
        raise ValueError("cannot canonicalize a zero normal")
    row = primitive(integer_row(list(h.coefficients) + [h.bound]))
    return Halfspace(tuple(row[:-1]), row[-1])


@dataclass(frozen=True)
class VPolytope:
    vertices: tuple
    dimension: int = -1

    def __post_init__(self):
        verts = tuple(tuple(Fraction(x) for x in v) for v in self.vertices)
        if not verts:
            raise ValueError("a polytope needs at least one vertex")
        lengths = {len(v) for v in verts}
        if len(lengths) != 1:
            raise ValueError("vertices have differing lengths")
        object.__setattr__(self, "vertices", verts)
        if self.dimension < 0:
            object.__setattr__(self, "dimension", lengths.pop())
        elif self.dimension != lengths.pop():
            raise ValueError("dimension does not match vertex length")


@dataclass(frozen=True)
class HPolytope:
    """Facet halfspaces, possibly inside an affine hull.

    For full-dimensional input ``coordinates`` lists every ambient coordinate
    and ``equations`` is empty.  Otherwise the halfspaces are expressed in the
    hull coordinates ``coordinates`` (a subset of ambient indices) and
    ``equations`` holds ``coefficients . x == bound`` constraints cutting out
    the hull in ambient coordinates.
    """

    halfspaces: tuple[Halfspace, ...]
    coordinates: tuple[int, ...]
    equations: tuple[Halfspace, ...] = ()
    stats: dict = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.halfspaces)

    def __iter__(self):
        return iter(self.halfspaces)


def affine_dim(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull (rank of differences from the first point)."""
    return affine_rank(points)


@dataclass(frozen=True)
class FacetCheck:
    valid: bool
    is_facet: bool
    saturating_vertex_count: int


def verify_facet(h: Halfspace, vp: VPolytope) -> FacetCheck:
    """Check validity of ``h`` on ``vp`` and whether it defines a facet."""
    if h.dimension != vp.dimension:
        raise ValueError(f"halfspace has dimension {h.dimension}, polytope {vp.dimension}")
    slacks = [h.slack(v) for v in vp.vertices]
    valid = all(s >= 0 for s in slacks)
    tight = [v for v, s in zip(vp.vertices, slacks) if s == 0]
    is_facet = False
    if valid and tight:
        is_facet = affine_dim(tight) == affine_dim(vp.vertices) - 1
    return FacetCheck(valid, is_facet, len(tight))


def _dual_extreme_rays(rows: list[list[int]], ray_cap: int) -> tuple[list[list[int]], dict]:
    """Extreme rays of ``{h : row . h >= 0}`` for full-rank integer ``rows``."""
    dim = len(rows[0])
    basis = independent_rows(rows)
    assert len(basis) == dim
    inv = inverse([rows[i] for i in basis])
    # columns of the inverse are the rays of the initial simplicial cone
    rays = [primitive(integer_row(inv[r][c] for r in range(dim))) for c in range(dim)]
    zero = [0] * dim
    bit_of = {}
    for k, i in enumerate(basis):
        bit_of[i] = 1 << k
    for c in range(dim):
        mask = 0
        for k in range(dim):
            if k != c:
                mask |= 1 << k
        zero[c] = mask
    order = basis + [i for i in range(len(rows)) if i not in set(basis)]
    for pos, i in enumerate(order[dim:], start=dim):
        bit_of[i] = 1 << pos
    peak = len(rays)
    for i in order[dim:]:
        row = rows[i]
        bit = bit_of[i]
        nz = [j for j, v in enumerate(row) if v]
        values = [sum(row[j] * ray[j] for j in nz) for ray in rays]
        pos = [k for k, s in enumerate(values) if s > 0]
        neg = [k for k, s in enumerate(values) if s < 0]
        if not neg:
            for k, s in enumerate(values):
                if s == 0:
                    zero[k] |= bit
            continue
        new_rays, new_zero = [], []
        for k, s in enumerate(values):
            if s > 0:
                new_rays.append(rays[k])
                new_zero.append(zero[k])
            elif s == 0:
                new_rays.append(rays[k])
                new_zero.append(zero[k] | bit)
        need = dim - 2
        for p in pos:
            zp = zero[p]
            sp = values[p]
            rp = rays[p]
            for m in neg:
                common = zp & zero[m]
                if common.bit_count() < need:
                    continue
                adjacent = True
                for q, zq in enumerate(zero):
                    if q != p and q != m and zq & common == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                sm = values[m]
                rm = rays[m]
                new_rays.append(primitive([sp * a - sm * b for a, b in zip(rm, rp)]))
                new_zero.append(common | bit)
                if len(new_rays) > ray_cap:
                    raise CapacityError(f"intermediate ray count exceeded cap {ray_cap}")
        rays, zero = new_rays, new_zero
        peak = max(peak, len(rays))
    return rays, {"peak_rays": peak, "insertions": len(rows) - dim}


def dd_convert(
    vp: VPolytope, ray_cap: int = DEFAULT_RAY_CAP, sort_vertices: bool = True
) -> HPolytope:
    """Facet halfspaces of the convex hull of ``vp.vertices``.

    Vertices are inserted in lexicographic order unless ``sort_vertices`` is
    False, in which case the given order is used (the result does not depend
    on it).  Duplicate points are dropped.

    Raises
    ------
    CapacityError
        If the number of intermediate rays exceeds ``ray_cap``.
    """
    points = list(dict.fromkeys(vp.vertices))
    if sort_vertices:
        points.sort()
    d = vp.dimension
    homog = [integer_row([1, *p]) for p in points]
    r = len(independent_rows(homog))
    equations: list[Halfspace] = []
    coords = list(range(d))
    if r < d + 1:
        cols = pivot_columns(homog, prefer=[0])
        if 0 not in cols:  # pragma: no cover - column 0 is all ones
            raise AssertionError("homogenizing column dropped")
        basis_rows = independent_rows(homog)
        sub = [[homog[i][j] for j in cols] for i in basis_rows]
        inv = inverse(sub)
        for j in range(d + 1):
            if j in cols:
                continue
            target = [homog[i][j] for i in basis_rows]
            # column j == sum_k c_k * column cols[k] on every vertex
            c = [sum(inv[k][t] * target[t] for t in range(len(target))) for k in range(len(cols))]
            coef = [Fraction(0)] * d
            coef[j - 1] += 1
            bound = c[0]
            for k, col in enumerate(cols[1:], start=1):
                coef[col - 1] -= c[k]
            equations.append(canonicalize(Halfspace(tuple(coef), bound)))
        homog = [[row[j] for j in cols] for row in homog]
        coords = [j - 1 for j in cols[1:]]
    if r == 1:
        return HPolytope((), tuple(coords), tuple(equations), {"peak_rays": 0})
    rays, stats = _dual_extreme_rays(homog, ray_cap)
    halfspaces = set()
    for ray in rays:
        if not any(ray[1:]):
            continue
        halfspaces.add(canonicalize(Halfspace(tuple(-v for v in ray[1:]), ray[0])))
    stats["facets"] = len(halfspaces)
    return HPolytope(tuple(sorted(halfspaces)), tuple(coords), tuple(equations), stats)
