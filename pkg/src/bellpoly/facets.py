"""Bell inequalities: probability and correlator forms, symmetries and orbits.

Correlators use the convention outcome 0 -> +1, outcome 1 -> -1, so that
``P(0...0 | chi) = 2**-|chi| * sum over subsets S of chi of <E_S>`` with
``E_() = 1``.  A correlator key is a term (tuple of ``(party, setting)``
pairs); the empty key is the constant.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .exact import integer_row, primitive
from .polytope import Halfspace, VPolytope, canonicalize, dd_convert
from .scenario import (
    PARTY_LETTERS,
    Behavior,
    BellScenario,
    Term,
    enumerate_vertices,
)

__all__ = [
    "CATALOG_VERSION",
    "BellInequality",
    "Catalog",
    "CorrelatorForm",
    "FacetClass",
    "SymmetryOp",
    "behavior_from_correlators",
    "build_catalog",
    "classify",
    "correlators_from_behavior",
    "evaluate",
    "from_correlator_form",
    "generalized_facet",
    "group_order",
    "is_positivity",
    "load_catalog",
    "named_inequality",
    "orbit",
    "poly",
    "positivity_inequalities",
    "symmetry_group",
    "to_correlator_form",
]

CATALOG_VERSION = 1


# --- correlator polynomials ---------------------------------------------------


def _key(pairs: Iterable[tuple[int, int]]) -> Term:
    return tuple(sorted(pairs))


def key_order(key: Term) -> tuple:
    return (len(key), tuple(p for p, _ in key), tuple(x for _, x in key))


class poly(dict):
    """Polynomial in commuting +/-1 observables, one observable per party per monomial.

    ``poly.var(1, 0)`` is ``B_0``; products of monomials from the same party are
    rejected since each party measures one setting per round.
    """

    @classmethod
    def var(cls, party: int, setting: int, coeff=1) -> "poly":
        return cls({((party, setting),): Fraction(coeff)})

    @classmethod
    def const(cls, value) -> "poly":
        return cls({(): Fraction(value)})

    def _coerce(self, other) -> "poly":
        return other if isinstance(other, poly) else poly.const(other)

    def __add__(self, other):
        out = poly(self)
        for k, v in self._coerce(other).items():
            out[k] = out.get(k, 0) + v
        return poly({k: v for k, v in out.items() if v})

    __radd__ = __add__

    def __neg__(self):
        return poly({k: -v for k, v in self.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict = {}
        for k1, v1 in self.items():
            for k2, v2 in other.items():
                parties = {p for p, _ in k1}
                if any(p in parties for p, _ in k2):
                    raise ValueError("monomials share a party")
                k = _key(k1 + k2)
                out[k] = out.get(k, 0) + v1 * v2
        return poly({k: v for k, v in out.items() if v})

    __rmul__ = __mul__


# --- forms --------------------------------------------------------------------


@dataclass(frozen=True)
class CorrelatorForm:
    """``sum_S coeff_S <E_S> + constant <= bound``."""

    scenario: BellScenario
    terms: tuple[tuple[Term, Fraction], ...]
    bound: Fraction
    constant: Fraction = Fraction(0)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        items = dict(self.terms) if not isinstance(self.terms, Mapping) else dict(self.terms)
        const = Fraction(self.constant) + Fraction(items.pop((), 0))
        for key in items:
            for p, x in key:
                if p >= self.scenario.n_parties or x >= self.scenario.settings[p]:
                    raise ValueError(f"term {key} does not fit scenario {self.scenario}")
        clean = tuple(
            sorted(((k, Fraction(v)) for k, v in items.items() if v), key=lambda kv: key_order(kv[0]))
        )
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "bound", Fraction(self.bound))
        object.__setattr__(self, "constant", const)

    @classmethod
    def from_poly(cls, scenario, p: Mapping, bound, name: str = "") -> "CorrelatorForm":
        return cls(scenario, tuple(p.items()), bound, name=name)

    def as_dict(self) -> dict[Term, Fraction]:
        return dict(self.terms)

    def coefficient(self, key: Term) -> Fraction:
        if not key:
            return self.constant
        return self.as_dict().get(_key(key), Fraction(0))

    def folded(self) -> "CorrelatorForm":
        """Same inequality with the constant moved into the bound."""
        return CorrelatorForm(self.scenario, self.terms, self.bound - self.constant, name=self.name)

    def scaled(self, factor) -> "CorrelatorForm":
        factor = Fraction(factor)
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        return CorrelatorForm(
            self.scenario,
            tuple((k, v * factor) for k, v in self.terms),
            self.bound * factor,
            self.constant * factor,
            name=self.name,
        )

    def integer_folded(self) -> "CorrelatorForm":
        """Folded form scaled to coprime integer coefficients and bound."""
        f = self.folded()
        row = primitive(integer_row([v for _, v in f.terms] + [f.bound]))
        terms = tuple((k, Fraction(v)) for (k, _), v in zip(f.terms, row[:-1]))
        return CorrelatorForm(self.scenario, terms, Fraction(row[-1]), name=self.name)

    def value(self, correlators: Mapping[Term, object]):
        """Left-hand side (constant included) for the given correlator values."""
        return self.constant + sum(v * correlators[k] for k, v in self.terms)

    def algebraic_cap(self) -> Fraction:
        return sum(abs(v) for _, v in self.terms) + abs(self.constant)

    def __str__(self) -> str:
        parts = []
        for k, v in self.terms:
            mono = "".join(f"{PARTY_LETTERS[p]}{x}" for p, x in k)
            parts.append(f"{'+' if v > 0 else '-'} {_fmt(abs(v))}{mono}")
        if self.constant:
            parts.append(f"{'+' if self.constant > 0 else '-'} {abs(self.constant)}")
        text = " ".join(parts)
        text = text[2:] if text.startswith("+ ") else "-" + text[2:] if text.startswith("- ") else text
        return f"{text} <= {self.bound}"


def _fmt(v: Fraction) -> str:
    return "" if v == 1 else f"{v}*"


@dataclass(frozen=True)
class BellInequality:
    """Canonical probability form ``coefficients . P <= bound``."""

    scenario: BellScenario
    halfspace: Halfspace

    def __post_init__(self):
        h = canonicalize(self.halfspace)
        if h.dimension != self.scenario.dimension:
            raise ValueError("inequality dimension does not match scenario")
        object.__setattr__(self, "halfspace", h)

    @classmethod
    def from_coefficients(cls, scenario, coefficients, bound) -> "BellInequality":
        return cls(scenario, Halfspace(tuple(coefficients), bound))

    @classmethod
    def from_terms(cls, scenario, coefficients: Mapping[Term, object], bound) -> "BellInequality":
        coeffs = [0] * scenario.dimension
        for term, v in coefficients.items():
            coeffs[scenario.term_index[_key(term)]] += v
        return cls.from_coefficients(scenario, coeffs, bound)

    @property
    def coefficients(self) -> tuple[int, ...]:
        return self.halfspace.coefficients

    @property
    def bound(self) -> int:
        return self.halfspace.bound

    def sort_key(self) -> tuple:
        return (self.coefficients, self.bound)

    def __str__(self) -> str:
        parts = []
        for label, c in zip(self.scenario.labels(), self.coefficients):
            if c:
                parts.append(f"{'+' if c > 0 else '-'} {'' if abs(c) == 1 else abs(c)}{label}")
        return " ".join(parts).lstrip("+ ") + f" <= {self.bound}"


def evaluate(ineq: BellInequality, b: Behavior):
    """Exact left-hand side ``coefficients . b`` (satisfied iff <= ``ineq.bound``)."""
    if b.scenario != ineq.scenario:
        raise ValueError(f"behavior scenario {b.scenario} differs from {ineq.scenario}")
    return ineq.halfspace.lhs(b.coordinates)


def _subsets(term: Term):
    for r in range(len(term) + 1):
        yield from itertools.combinations(term, r)


def to_correlator_form(ineq: BellInequality) -> CorrelatorForm:
    """Substitute ``P(0..0|chi) = 2**-|chi| sum_{S <= chi} E_S`` and collect terms."""
    out: dict[Term, Fraction] = {}
    for term, c in zip(ineq.scenario.terms, ineq.coefficients):
        if not c:
            continue
        w = Fraction(c, 2 ** len(term))
        for sub in _subsets(term):
            out[sub] = out.get(sub, 0) + w
    return CorrelatorForm(ineq.scenario, tuple(out.items()), Fraction(ineq.bound))


def from_correlator_form(cf: CorrelatorForm) -> BellInequality:
    """Inverse of :func:`to_correlator_form` (up to positive scaling)."""
    scenario = cf.scenario
    coeffs = [Fraction(0)] * scenario.dimension
    bound = cf.bound - cf.constant
    for key, t in cf.terms:
        for sub in _subsets(key):
            w = t * (-1) ** (len(key) - len(sub)) * 2 ** len(sub)
            if sub:
                coeffs[scenario.term_index[sub]] += w
            else:
                bound -= w
    return BellInequality(scenario, Halfspace(tuple(coeffs), bound))


def correlators_from_behavior(b: Behavior) -> dict[Term, object]:
    """All correlators ``<E_S>`` (``E_() = 1``) of a behavior."""
    out: dict[Term, object] = {(): 1}
    for term in b.scenario.terms:
        out[term] = sum(
            (-1) ** (len(term) - len(sub)) * 2 ** len(sub) * (b[sub] if sub else 1)
            for sub in _subsets(term)
        )
    return out


def behavior_from_correlators(scenario: BellScenario, correlators: Mapping[Term, object]) -> Behavior:
    coords = []
    for term in scenario.terms:
        total = sum(correlators[sub] if sub else 1 for sub in _subsets(term))
        coords.append(Fraction(total, 2 ** len(term)) if isinstance(total, (int, Fraction)) else total / 2 ** len(term))
    return Behavior(scenario, tuple(coords))


# --- positivity ---------------------------------------------------------------


@lru_cache(maxsize=None)
def positivity_inequalities(scenario: BellScenario) -> frozenset:
    """``p(a|x) >= 0`` for every full outcome and setting tuple."""
    out = set()
    for xs in scenario.setting_tuples:
        for a in scenario.outcome_tuples:
            p = poly.const(1)
            for party, (x, out_) in enumerate(zip(xs, a)):
                p = p * (1 + poly.var(party, x, 1 if out_ == 0 else -1))
            out.add(from_correlator_form(CorrelatorForm.from_poly(scenario, -p, 0)))
    return frozenset(out)


def is_positivity(ineq: BellInequality) -> bool:
    return ineq in positivity_inequalities(ineq.scenario)


# --- symmetries ---------------------------------------------------------------


@dataclass(frozen=True)
class SymmetryOp:
    """Relabeling: party ``i`` becomes party ``party_perm[i]``, its setting ``x``
    becomes ``setting_perm[i][x]``, and the outcome of ``(i, x)`` is flipped when
    ``flips[i][x]`` is set (flips act before relabeling)."""

    party_perm: tuple[int, ...]
    setting_perm: tuple[tuple[int, ...], ...]
    flips: tuple[tuple[bool, ...], ...]

    @classmethod
    def identity(cls, scenario: BellScenario) -> "SymmetryOp":
        return cls(
            tuple(range(scenario.n_parties)),
            tuple(tuple(range(m)) for m in scenario.settings),
            tuple((False,) * m for m in scenario.settings),
        )

    def check(self, scenario: BellScenario) -> None:
        for i, j in enumerate(self.party_perm):
            if scenario.settings[i] != scenario.settings[j]:
                raise ValueError("party permutation must respect setting counts")

    def map_key(self, key: Term) -> tuple[int, Term]:
        sign = 1
        out = []
        for p, x in key:
            if self.flips[p][x]:
                sign = -sign
            out.append((self.party_perm[p], self.setting_perm[p][x]))
        return sign, _key(out)

    def apply_form(self, cf: CorrelatorForm) -> CorrelatorForm:
        terms = []
        for k, v in cf.terms:
            s, k2 = self.map_key(k)
            terms.append((k2, s * v))
        return CorrelatorForm(cf.scenario, tuple(terms), cf.bound, cf.constant, name=cf.name)

    def apply(self, ineq: BellInequality) -> BellInequality:
        return from_correlator_form(self.apply_form(to_correlator_form(ineq)))

    def compose(self, other: "SymmetryOp") -> "SymmetryOp":
        """``self`` after ``other``."""
        n = len(self.party_perm)
        perm = tuple(self.party_perm[other.party_perm[i]] for i in range(n))
        sperm, flips = [], []
        for i in range(n):
            j = other.party_perm[i]
            sperm.append(tuple(self.setting_perm[j][other.setting_perm[i][x]] for x in range(len(other.setting_perm[i]))))
            flips.append(
                tuple(
                    other.flips[i][x] != self.flips[j][other.setting_perm[i][x]]
                    for x in range(len(other.setting_perm[i]))
                )
            )
        return SymmetryOp(perm, tuple(sperm), tuple(flips))

    def inverse(self) -> "SymmetryOp":
        n = len(self.party_perm)
        perm = [0] * n
        sperm: list = [None] * n
        flips: list = [None] * n
        for i in range(n):
            j = self.party_perm[i]
            perm[j] = i
            m = len(self.setting_perm[i])
            sp = [0] * m
            fl = [False] * m
            for x in range(m):
                y = self.setting_perm[i][x]
                sp[y] = x
                fl[y] = self.flips[i][x]
            sperm[j] = tuple(sp)
            flips[j] = tuple(fl)
        return SymmetryOp(tuple(perm), tuple(sperm), tuple(flips))


def symmetry_group(scenario: BellScenario, party_permutations: bool = True) -> list[SymmetryOp]:
    """Generators: one outcome flip per (party, setting), one setting swap per
    multi-setting party, and transpositions of parties with equal setting counts."""
    ident = SymmetryOp.identity(scenario)
    gens = []
    for p, m in enumerate(scenario.settings):
        for x in range(m):
            flips = [list(f) for f in ident.flips]
            flips[p][x] = True
            gens.append(SymmetryOp(ident.party_perm, ident.setting_perm, tuple(tuple(f) for f in flips)))
    for p, m in enumerate(scenario.settings):
        if m == 2:
            sperm = list(ident.setting_perm)
            sperm[p] = (1, 0)
            gens.append(SymmetryOp(ident.party_perm, tuple(sperm), ident.flips))
    if party_permutations:
        for i, j in itertools.combinations(range(scenario.n_parties), 2):
            if scenario.settings[i] == scenario.settings[j]:
                perm = list(range(scenario.n_parties))
                perm[i], perm[j] = j, i
                gens.append(SymmetryOp(tuple(perm), ident.setting_perm, ident.flips))
    return gens


def group_order(scenario: BellScenario, party_permutations: bool = True) -> int:
    """Order of the group generated by :func:`symmetry_group`."""
    order = 2 ** sum(scenario.settings)
    order *= math.prod(math.factorial(m) for m in scenario.settings)
    if party_permutations:
        counts: dict[int, int] = {}
        for m in scenario.settings:
            counts[m] = counts.get(m, 0) + 1
        order *= math.prod(math.factorial(c) for c in counts.values())
    return order


def _signed_key_maps(generators: Sequence[SymmetryOp], keys) -> list[dict]:
    return [{k: g.map_key(k) for k in keys} for g in generators]


def orbit(ineq: BellInequality, generators: Sequence[SymmetryOp]) -> set[BellInequality]:
    """Orbit of ``ineq`` under the group generated by ``generators``.

    The search runs on folded correlator forms, on which every relabeling acts
    as a signed permutation of terms, so no rescaling is ever needed.
    """
    cf = to_correlator_form(ineq).folded()
    keys = ineq.scenario.terms
    maps = _signed_key_maps(generators, keys)
    start = tuple(cf.terms)
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for m in maps:
            nxt = []
            for k, v in cur:
                s, k2 = m[k]
                nxt.append((k2, v if s > 0 else -v))
            nxt = tuple(sorted(nxt, key=lambda kv: key_order(kv[0])))
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return {from_correlator_form(CorrelatorForm(ineq.scenario, t, cf.bound)) for t in seen}


@dataclass(frozen=True)
class FacetClass:
    representative: BellInequality
    orbit_size: int
    members: tuple[BellInequality, ...]
    positivity: bool


def classify(facets: Sequence[BellInequality], party_permutations: bool = True) -> list[FacetClass]:
    """Partition ``facets`` into symmetry orbits.

    Classes are ordered with positivity classes first, then by representative.
    """
    if not facets:
        return []
    scenario = facets[0].scenario
    if any(f.scenario != scenario for f in facets):
        raise ValueError("facets come from different scenarios")
    gens = symmetry_group(scenario, party_permutations)
    remaining = set(facets)
    classes = []
    for f in sorted(remaining, key=BellInequality.sort_key):
        if f not in remaining:
            continue
        orb = orbit(f, gens)
        members = tuple(sorted((g for g in orb if g in remaining), key=BellInequality.sort_key))
        remaining.difference_update(members)
        rep = min(orb, key=BellInequality.sort_key)
        classes.append(FacetClass(rep, len(orb), members, is_positivity(rep)))
    classes.sort(key=lambda c: (not c.positivity, c.representative.sort_key()))
    return classes


# --- named inequalities -------------------------------------------------------


def _chsh(p: int, q: int) -> poly:
    a1, a2 = poly.var(p, 0), poly.var(p, 1)
    b1, b2 = poly.var(q, 0), poly.var(q, 1)
    return a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2


def generalized_facet(n: int) -> CorrelatorForm:
    """``(-2 + A1(B1+B2) + A2(B1-B2)) (1+C1) ... (1+N1) <= 0`` with the constant folded.

    Parties 0 and 1 measure two settings, every other party one.
    """
    if n < 3:
        raise ValueError("the generalized facet needs n >= 3 parties")
    scenario = BellScenario.minimal(n)
    p = _chsh(0, 1) - 2
    for k in range(2, n):
        p = p * (1 + poly.var(k, 0))
    return CorrelatorForm.from_poly(scenario, p, 0, name=f"F{n}").folded()


def _single_setting_family(two: tuple[int, int], one: int) -> poly:
    c = poly.var(one, 0)
    chsh = _chsh(*two)
    return chsh + chsh * c - 2 * c


def named_inequality(name: str) -> CorrelatorForm:
    """CHSH, I1, I2, I3, Mermin or Svetlichny (case-insensitive)."""
    key = name.strip().lower()
    if key == "chsh":
        return CorrelatorForm.from_poly(BellScenario((2, 2)), _chsh(0, 1), 2, name="CHSH")
    if key == "i1":
        return CorrelatorForm.from_poly(BellScenario((1, 2, 2)), _single_setting_family((1, 2), 0), 2, name="I1")
    if key == "i2":
        return CorrelatorForm.from_poly(BellScenario((2, 1, 2)), _single_setting_family((0, 2), 1), 2, name="I2")
    if key == "i3":
        return CorrelatorForm.from_poly(BellScenario((2, 2, 1)), _single_setting_family((0, 1), 2), 2, name="I3")
    a1, a2, b1, b2, c1, c2 = (poly.var(p, x) for p in range(3) for x in range(2))
    if key == "mermin":
        p = a1 * b1 * c2 + a1 * b2 * c1 + a2 * b1 * c1 - a2 * b2 * c2
        return CorrelatorForm.from_poly(BellScenario((2, 2, 2)), p, 2, name="Mermin")
    if key == "svetlichny":
        d1, d2 = b1 + b2, b1 - b2
        p = a1 * d1 * c1 + a1 * d2 * c2 + a2 * d2 * c1 - a2 * d1 * c2
        return CorrelatorForm.from_poly(BellScenario((2, 2, 2)), p, 4, name="Svetlichny")
    raise KeyError(f"unknown inequality {name!r}; expected CHSH, I1, I2, I3, Mermin or Svetlichny")


NAMED_INEQUALITIES = ("CHSH", "I1", "I2", "I3", "Mermin", "Svetlichny")


# --- catalogs -----------------------------------------------------------------


@dataclass(frozen=True)
class Catalog:
    scenario: BellScenario
    dimension: int
    vertex_count: int
    facets: tuple[BellInequality, ...]
    classes: tuple[FacetClass, ...]
    role_classes: tuple[FacetClass, ...] = ()

    def class_of(self, ineq: BellInequality) -> int:
        for i, c in enumerate(self.classes):
            if ineq in c.members:
                return i
        raise KeyError(ineq)

    @property
    def positivity_count(self) -> int:
        return sum(len(c.members) for c in self.classes if c.positivity)

    @property
    def nontrivial_classes(self) -> list[FacetClass]:
        return [c for c in self.classes if not c.positivity]

    def summary(self) -> str:
        sizes = ",".join(f"1x{len(c.members)}" for c in self.nontrivial_classes) or "0"
        return (
            f"dim={self.dimension} vertices={self.vertex_count} facets={len(self.facets)} "
            f"positivity={self.positivity_count} classes={sizes}"
        )

    def to_json(self) -> str:
        class_index = {}
        for i, c in enumerate(self.classes):
            for m in c.members:
                class_index[m] = (i, len(c.members))
        role_index = {}
        for i, c in enumerate(self.role_classes):
            for m in c.members:
                role_index[m] = i
        entries = []
        for f in self.facets:
            cf = to_correlator_form(f).integer_folded()
            cid, csize = class_index[f]
            entry = {
                "prob_coeffs": list(f.coefficients),
                "bound": f.bound,
                "correlator_terms": [
                    {"parties": [p for p, _ in k], "settings": [x for _, x in k], "coeff": int(v)}
                    for k, v in cf.terms
                ],
                "correlator_bound": int(cf.bound),
                "positivity": is_positivity(f),
                "class_id": cid,
                "class_size": csize,
            }
            if role_index:
                entry["role_class_id"] = role_index[f]
            entries.append(entry)
        doc = {
            "scenario": list(self.scenario.settings),
            "dimension": self.dimension,
            "vertex_count": self.vertex_count,
            "facets": entries,
            "version": CATALOG_VERSION,
        }
        return json.dumps(doc, indent=1) + "\n"


def build_catalog(scenario: BellScenario, ray_cap: int | None = None) -> Catalog:
    """Enumerate, verify-free, and classify the facets of the local polytope."""
    vertices = enumerate_vertices(scenario)
    kwargs = {} if ray_cap is None else {"ray_cap": ray_cap}
    hp = dd_convert(VPolytope(tuple(v.coordinates for v in vertices)), **kwargs)
    facets = [BellInequality(scenario, h) for h in hp.halfspaces]
    classes = classify(facets)
    role_classes = classify(facets, party_permutations=False)
    order = {id(c): i for i, c in enumerate(classes)}
    ranked = sorted(
        facets,
        key=lambda f: (next(order[id(c)] for c in classes if f in c.members), f.sort_key()),
    )
    return Catalog(scenario, scenario.dimension, len(vertices), tuple(ranked), tuple(classes), tuple(role_classes))


def load_catalog(text: str) -> tuple[BellScenario, list[BellInequality], dict]:
    """Parse a catalog document; returns the scenario, facets and the raw document."""
    doc = json.loads(text)
    if "version" not in doc:
        raise ValueError("catalog has no version field")
    if doc["version"] != CATALOG_VERSION:
        raise ValueError(f"unsupported catalog version {doc['version']}")
    scenario = BellScenario(tuple(doc["scenario"]))
    facets = [BellInequality.from_coefficients(scenario, f["prob_coeffs"], f["bound"]) for f in doc["facets"]]
    return scenario, facets, doc
