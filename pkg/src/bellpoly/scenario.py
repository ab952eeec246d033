"""Bell scenarios, the "outcome-0" probability parametrization and local vertices.

A scenario is described by the number of dichotomic settings of every party.
Coordinates of a behavior are the probabilities ``P(0...0 | chi)`` that every
party in a term ``chi`` outputs 0, ordered canonically by term size, then by
party indices, then by setting indices.  For ``[2, 2, 1]`` this gives::

    P(a0) P(a1) P(b0) P(b1) P(c0) P(a0b0) P(a0b1) P(a1b0) P(a1b1)
    P(a0c0) P(a1c0) P(b0c0) P(b1c0) P(a0b0c0) P(a0b1c0) P(a1b0c0) P(a1b1c0)
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Real
from typing import Iterator, Mapping, Sequence

__all__ = [
    "PARTY_LETTERS",
    "DEFAULT_VERTEX_CAP",
    "BellScenario",
    "Behavior",
    "CapacityError",
    "DeterministicStrategy",
    "NormalizationError",
    "NoSignalingReport",
    "NoSignalingViolation",
    "SignalingError",
    "Term",
    "check_no_signaling",
    "deterministic_joint",
    "dimension",
    "enumerate_strategies",
    "enumerate_vertices",
    "parse_settings",
    "project_to_parametrization",
    "term_label",
    "uniform_joint",
]

PARTY_LETTERS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
DEFAULT_VERTEX_CAP = 2**20

#: A term is a tuple of ``(party, setting)`` pairs sorted by party.
Term = tuple[tuple[int, int], ...]


class CapacityError(RuntimeError):
    """A computation would exceed its configured size cap."""


class NormalizationError(ValueError):
    """A full joint distribution is not normalized for some setting tuple."""


class SignalingError(ValueError):
    """A full joint distribution violates no-signaling."""


@dataclass(frozen=True)
class BellScenario:
    """Party count and per-party setting counts; every setting has 2 outcomes."""

    settings: tuple[int, ...]

    def __post_init__(self):
        settings = tuple(int(m) for m in self.settings)
        object.__setattr__(self, "settings", settings)
        if len(settings) < 2:
            raise ValueError("a Bell scenario needs at least 2 parties")
        if any(m < 1 for m in settings):
            raise ValueError(f"setting counts must be >= 1, got {list(settings)}")

    @classmethod
    def parse(cls, text: str) -> "BellScenario":
        """Build a scenario from a comma separated list such as ``"2,2,1"``."""
        try:
            values = [int(tok) for tok in text.replace(" ", "").split(",") if tok]
        except ValueError as exc:
            raise ValueError(f"cannot parse settings list {text!r}") from exc
        return cls(tuple(values))

    @classmethod
    def minimal(cls, n_parties: int) -> "BellScenario":
        """Two parties with 2 settings, every other party with 1."""
        if n_parties < 2:
            raise ValueError("need at least 2 parties")
        return cls((2, 2) + (1,) * (n_parties - 2))

    @property
    def n_parties(self) -> int:
        return len(self.settings)

    @property
    def is_minimal(self) -> bool:
        return sorted(self.settings, reverse=True)[:2] == [2, 2] and all(
            m == 1 for m in sorted(self.settings, reverse=True)[2:]
        )

    @cached_property
    def terms(self) -> tuple[Term, ...]:
        """Canonically ordered coordinate terms of the parametrization."""
        out = []
        n = self.n_parties
        for size in range(1, n + 1):
            for parties in itertools.combinations(range(n), size):
                for choice in itertools.product(*(range(self.settings[p]) for p in parties)):
                    out.append(tuple(zip(parties, choice)))
        return tuple(out)

    @cached_property
    def term_index(self) -> dict[Term, int]:
        return {t: i for i, t in enumerate(self.terms)}

    @property
    def dimension(self) -> int:
        return dimension(self)

    @property
    def vertex_count(self) -> int:
        return 2 ** sum(self.settings)

    @cached_property
    def setting_tuples(self) -> tuple[tuple[int, ...], ...]:
        return tuple(itertools.product(*(range(m) for m in self.settings)))

    @cached_property
    def outcome_tuples(self) -> tuple[tuple[int, ...], ...]:
        return tuple(itertools.product((0, 1), repeat=self.n_parties))

    def labels(self) -> list[str]:
        return [term_label(t) for t in self.terms]

    def __str__(self) -> str:
        return ",".join(str(m) for m in self.settings)


def term_label(term: Term) -> str:
    """``((0, 0), (2, 0))`` -> ``"P(a0c0)"``."""
    return "P(" + "".join(f"{PARTY_LETTERS[p].lower()}{x}" for p, x in term) + ")"


def dimension(scenario: BellScenario) -> int:
    """Dimension of the no-signaling probability space, ``prod(m_i + 1) - 1``."""
    return math.prod(m + 1 for m in scenario.settings) - 1


@dataclass(frozen=True)
class Behavior:
    """Coordinates of a behavior in the canonical parametrization.

    Coordinates are exact ``Fraction`` values for local vertices and other
    rational behaviors, floats for behaviors computed from quantum states.
    """

    scenario: BellScenario
    coordinates: tuple

    def __post_init__(self):
        coords = tuple(self.coordinates)
        object.__setattr__(self, "coordinates", coords)
        if len(coords) != self.scenario.dimension:
            raise ValueError(
                f"behavior has {len(coords)} coordinates, scenario {self.scenario} "
                f"needs {self.scenario.dimension}"
            )

    def __getitem__(self, term: Term):
        return self.coordinates[self.scenario.term_index[term]]

    def __iter__(self):
        return iter(self.coordinates)

    def __len__(self):
        return len(self.coordinates)

    def in_unit_cube(self, tol: float = 0.0) -> bool:
        return all(-tol <= c <= 1 + tol for c in self.coordinates)

    def is_monotone(self, tol: float = 0.0) -> bool:
        """Every joint coordinate is at most each of its marginal coordinates."""
        for term, value in zip(self.scenario.terms, self.coordinates):
            if len(term) < 2:
                continue
            for drop in range(len(term)):
                sub = term[:drop] + term[drop + 1 :]
                if value > self[sub] + tol:
                    return False
        return True


@dataclass(frozen=True)
class DeterministicStrategy:
    """A fixed outcome for every ``(party, setting)`` pair."""

    scenario: BellScenario
    outcomes: tuple[tuple[int, ...], ...]

    def outcome(self, party: int, setting: int) -> int:
        return self.outcomes[party][setting]

    def behavior(self) -> Behavior:
        coords = []
        for term in self.scenario.terms:
            hit = all(self.outcomes[p][x] == 0 for p, x in term)
            coords.append(Fraction(1) if hit else Fraction(0))
        return Behavior(self.scenario, tuple(coords))


def enumerate_strategies(scenario: BellScenario) -> Iterator[DeterministicStrategy]:
    """Deterministic strategies in lexicographic order of their outcome string."""
    total = sum(scenario.settings)
    for flat in itertools.product((0, 1), repeat=total):
        outcomes, pos = [], 0
        for m in scenario.settings:
            outcomes.append(tuple(flat[pos : pos + m]))
            pos += m
        yield DeterministicStrategy(scenario, tuple(outcomes))


def enumerate_vertices(scenario: BellScenario, cap: int = DEFAULT_VERTEX_CAP) -> list[Behavior]:
    """Behaviors of all deterministic local strategies.

    Raises
    ------
    CapacityError
        If the number of strategies exceeds ``cap``.
    """
    if scenario.vertex_count > cap:
        raise CapacityError(
            f"scenario {scenario} has {scenario.vertex_count} deterministic strategies, cap is {cap}"
        )
    return [s.behavior() for s in enumerate_strategies(scenario)]


# --- full joint distributions ------------------------------------------------

FullJoint = Mapping[tuple[tuple[int, ...], tuple[int, ...]], Real]


@dataclass(frozen=True)
class NoSignalingViolation:
    """Marginal of ``parties`` depends on the settings of the remaining parties."""

    parties: tuple[int, ...]
    outcomes: tuple[int, ...]
    settings: tuple[int, ...]
    other_settings: tuple[int, ...]
    other_settings_alt: tuple[int, ...]
    difference: Real


@dataclass(frozen=True)
class NoSignalingReport:
    ok: bool
    violations: tuple[NoSignalingViolation, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def _infer_scenario(joint: FullJoint) -> BellScenario:
    keys = list(joint)
    if not keys:
        raise ValueError("empty joint distribution")
    n = len(keys[0][1])
    settings = tuple(max(k[1][i] for k in keys) + 1 for i in range(n))
    return BellScenario(settings)


def _marginal(joint, scenario, parties, outcomes, setting_tuple):
    rest = [i for i in range(scenario.n_parties) if i not in parties]
    total = 0
    for rest_out in itertools.product((0, 1), repeat=len(rest)):
        full = [0] * scenario.n_parties
        for p, a in zip(parties, outcomes):
            full[p] = a
        for p, a in zip(rest, rest_out):
            full[p] = a
        total += joint.get((tuple(full), setting_tuple), 0)
    return total


def _check_normalized(joint, scenario, tol):
    for xs in scenario.setting_tuples:
        total = sum(joint.get((a, xs), 0) for a in scenario.outcome_tuples)
        if abs(total - 1) > tol:
            raise NormalizationError(f"probabilities for settings {xs} sum to {total}, not 1")


def check_no_signaling(
    joint: FullJoint, scenario: BellScenario | None = None, tol: float = 0.0
) -> NoSignalingReport:
    """Check that every marginal is independent of the other parties' settings.

    ``joint`` maps ``(outcomes, settings)`` tuples to probabilities.  With the
    default ``tol=0`` the comparison is exact, which is what rational input
    wants; pass a small tolerance for floating point behaviors.

    Raises
    ------
    NormalizationError
        If the probabilities for some setting tuple do not sum to 1.
    """
    scenario = scenario or _infer_scenario(joint)
    _check_normalized(joint, scenario, tol)
    n = scenario.n_parties
    violations = []
    for size in range(1, n):
        for parties in itertools.combinations(range(n), size):
            rest = [i for i in range(n) if i not in parties]
            own_choices = list(itertools.product(*(range(scenario.settings[p]) for p in parties)))
            rest_choices = list(itertools.product(*(range(scenario.settings[p]) for p in rest)))
            if len(rest_choices) < 2:
                continue
            for xs in own_choices:
                for a in itertools.product((0, 1), repeat=size):
                    ref = None
                    for ys in rest_choices:
                        full = [0] * n
                        for p, x in zip(parties, xs):
                            full[p] = x
                        for p, y in zip(rest, ys):
                            full[p] = y
                        value = _marginal(joint, scenario, parties, a, tuple(full))
                        if ref is None:
                            ref, ref_ys = value, ys
                        elif abs(value - ref) > tol:
                            violations.append(
                                NoSignalingViolation(parties, a, xs, ref_ys, ys, value - ref)
                            )
    return NoSignalingReport(not violations, tuple(violations))


def project_to_parametrization(
    joint: FullJoint, scenario: BellScenario | None = None, tol: float = 0.0
) -> Behavior:
    """Coordinates ``P(0...0 | chi)`` of a normalized no-signaling joint.

    Raises
    ------
    SignalingError
        If the joint signals, since the coordinates would then depend on the
        settings of parties outside a term.
    """
    scenario = scenario or _infer_scenario(joint)
    report = check_no_signaling(joint, scenario, tol)
    if not report.ok:
        v = report.violations[0]
        raise SignalingError(
            f"joint distribution signals: marginal of parties {v.parties} changes by "
            f"{v.difference} between settings {v.other_settings} and {v.other_settings_alt}"
        )
    coords = []
    for term in scenario.terms:
        parties = tuple(p for p, _ in term)
        full = [0] * scenario.n_parties
        for p, x in term:
            full[p] = x
        coords.append(_marginal(joint, scenario, parties, (0,) * len(term), tuple(full)))
    return Behavior(scenario, tuple(coords))


def deterministic_joint(strategy: DeterministicStrategy) -> dict:
    """Full joint distribution of a deterministic strategy."""
    scenario = strategy.scenario
    joint = {}
    for xs in scenario.setting_tuples:
        hit = tuple(strategy.outcomes[p][x] for p, x in enumerate(xs))
        for a in scenario.outcome_tuples:
            joint[(a, xs)] = Fraction(1) if a == hit else Fraction(0)
    return joint


def uniform_joint(scenario: BellScenario) -> dict:
    value = Fraction(1, 2**scenario.n_parties)
    return {(a, xs): value for xs in scenario.setting_tuples for a in scenario.outcome_tuples}


def parse_settings(values: Sequence[int] | str) -> BellScenario:
    if isinstance(values, str):
        return BellScenario.parse(values)
    return BellScenario(tuple(values))
