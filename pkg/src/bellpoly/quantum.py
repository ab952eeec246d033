"""Dense multi-qubit states, dichotomic qubit observables and Bell expectations.

Party ``k`` is qubit ``k``, the leftmost factor of a ket: ``|101>`` has
amplitude index 5.  An observable is ``n . sigma`` for a unit Bloch vector
``n`` with outcome 0 on the +1 eigenspace, matching the correlator
convention of :mod:`bellpoly.facets`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Mapping, Sequence

import numpy as np

from .facets import CorrelatorForm
from .scenario import Behavior, BellScenario

__all__ = [
    "MAX_QUBITS",
    "PAULI",
    "DensityMatrix",
    "Observable",
    "PureState",
    "SettingsAssignment",
    "avg_bipartite_entropy",
    "behavior_of",
    "bell_expectation",
    "bell_operator",
    "coefficient_tensor",
    "correlation_tensor",
    "density",
    "entropy",
    "full_joint_of",
    "load_amplitudes",
    "reduced_state",
    "save_amplitudes",
    "tangle_gghz",
    "white_noise",
]

MAX_QUBITS = 12

PAULI = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


def _n_qubits(dim: int) -> int:
    n = int(round(np.log2(dim)))
    if 2**n != dim or n < 1:
        raise ValueError(f"dimension {dim} is not a power of two")
    if n > MAX_QUBITS:
        raise ValueError(f"{n} qubits exceeds the {MAX_QUBITS}-qubit cap")
    return n


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray
    label: str = ""

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).ravel().copy()
        _n_qubits(amps.size)
        norm = np.linalg.norm(amps)
        if abs(norm - 1) > 1e-12:
            raise ValueError(f"state norm is {norm}, expected 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes, label: str = "") -> "PureState":
        """Build a state from unnormalized amplitudes."""
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("zero vector is not a state")
        return cls(amps / norm, label)

    @classmethod
    def from_kets(cls, kets: Mapping[str, complex], label: str = "") -> "PureState":
        """``{"000": a, "111": b}`` -> ``a|000> + b|111>`` (normalized)."""
        n = len(next(iter(kets)))
        amps = np.zeros(2**n, dtype=complex)
        for bits, a in kets.items():
            if len(bits) != n:
                raise ValueError("kets have differing lengths")
            amps[int(bits, 2)] += a
        return cls.from_amplitudes(amps, label)

    @property
    def n(self) -> int:
        return _n_qubits(self.amplitudes.size)

    @property
    def matrix(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.matrix, self.label)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex).copy()
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        _n_qubits(m.shape[0])
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1) > 1e-12:
            raise ValueError(f"trace is {tr}, expected 1")
        if np.linalg.eigvalsh(m).min() < -1e-10:
            raise ValueError("density matrix is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return _n_qubits(self.matrix.shape[0])

    def density(self) -> "DensityMatrix":
        return self

    def is_pure(self, tol: float = 1e-10) -> bool:
        return abs(np.trace(self.matrix @ self.matrix).real - 1) < tol

    @staticmethod
    def mixture(weights: Sequence[float], states: Sequence, label: str = "") -> "DensityMatrix":
        m = sum(w * density(s).matrix for w, s in zip(weights, states))
        return DensityMatrix(m, label)


def density(state) -> DensityMatrix:
    """Density matrix of a pure state, density matrix or raw square array."""
    if isinstance(state, (PureState, DensityMatrix)):
        return state.density()
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        return PureState.from_amplitudes(arr).density()
    return DensityMatrix(arr)


def white_noise(n: int) -> DensityMatrix:
    return DensityMatrix(np.eye(2**n) / 2**n, "white")


@dataclass(frozen=True, eq=False)
class Observable:
    """``n . sigma`` for a unit Bloch vector ``n``."""

    bloch: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.bloch, dtype=float).copy()
        if v.shape != (3,) or abs(np.linalg.norm(v) - 1) > 1e-9:
            raise ValueError(f"Bloch vector must be a unit 3-vector, got {v}")
        v.setflags(write=False)
        object.__setattr__(self, "bloch", v)

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "Observable":
        return cls(np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]))

    @property
    def angles(self) -> tuple[float, float]:
        x, y, z = self.bloch
        return float(np.arccos(np.clip(z, -1, 1))), float(np.arctan2(y, x) % (2 * np.pi))

    @property
    def operator(self) -> np.ndarray:
        return np.tensordot(self.bloch, PAULI[1:], axes=1)

    def projector(self, outcome: int = 0) -> np.ndarray:
        sign = 1 if outcome == 0 else -1
        return (np.eye(2) + sign * self.operator) / 2


SIGMA_X = Observable(np.array([1.0, 0.0, 0.0]))
SIGMA_Y = Observable(np.array([0.0, 1.0, 0.0]))
SIGMA_Z = Observable(np.array([0.0, 0.0, 1.0]))


@dataclass(frozen=True, eq=False)
class SettingsAssignment:
    """One observable per ``(party, setting)``; stored as Bloch arrays per party."""

    bloch: tuple[np.ndarray, ...]

    def __post_init__(self):
        arrays = []
        for b in self.bloch:
            a = np.array(b, dtype=float).reshape(-1, 3)
            norms = np.linalg.norm(a, axis=1)
            if np.any(np.abs(norms - 1) > 1e-9):
                raise ValueError("settings must be unit Bloch vectors")
            a.setflags(write=False)
            arrays.append(a)
        object.__setattr__(self, "bloch", tuple(arrays))

    @classmethod
    def from_observables(cls, observables: Sequence[Sequence[Observable]]) -> "SettingsAssignment":
        return cls(tuple(np.array([o.bloch for o in party]) for party in observables))

    @classmethod
    def from_angles(cls, angles: Sequence[Sequence[tuple[float, float]]]) -> "SettingsAssignment":
        return cls.from_observables([[Observable.from_angles(t, p) for t, p in party] for party in angles])

    @property
    def settings(self) -> tuple[int, ...]:
        return tuple(a.shape[0] for a in self.bloch)

    def observable(self, party: int, setting: int) -> Observable:
        return Observable(self.bloch[party][setting])

    def angles(self) -> list[list[tuple[float, float]]]:
        return [[Observable(v).angles for v in party] for party in self.bloch]

    def fits(self, scenario: BellScenario) -> bool:
        return self.settings == scenario.settings


def _kron(ops: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, ops)


def _check_sizes(cf: CorrelatorForm, rho: DensityMatrix, s: SettingsAssignment) -> None:
    if rho.n != cf.scenario.n_parties:
        raise ValueError(f"state has {rho.n} qubits, inequality needs {cf.scenario.n_parties}")
    if not s.fits(cf.scenario):
        raise ValueError(f"settings {s.settings} do not match scenario {cf.scenario}")


def bell_operator(cf: CorrelatorForm, s: SettingsAssignment) -> np.ndarray:
    """``sum coeff * (tensor product of observables)`` with identities elsewhere."""
    n = cf.scenario.n_parties
    eye = np.eye(2, dtype=complex)
    op = cf.constant * np.eye(2**n, dtype=complex)
    for key, coeff in cf.terms:
        factors = [eye] * n
        for p, x in key:
            factors[p] = s.observable(p, x).operator
        op = op + float(coeff) * _kron(factors)
    return op


def coefficient_tensor(cf: CorrelatorForm) -> np.ndarray:
    """``G[s_1..s_n]``: index 0 means the party is absent, ``x + 1`` its setting ``x``."""
    shape = tuple(m + 1 for m in cf.scenario.settings)
    g = np.zeros(shape)
    g[(0,) * len(shape)] = float(cf.constant)
    for key, coeff in cf.terms:
        idx = [0] * len(shape)
        for p, x in key:
            idx[p] = x + 1
        g[tuple(idx)] = float(coeff)
    return g


def bell_expectation(cf: CorrelatorForm, state, s: SettingsAssignment) -> float:
    """``Tr(rho B)`` for the Bell operator ``B`` of ``cf`` under settings ``s``.

    Computed from the correlation tensor, so the ``2^n x 2^n`` operator is
    never formed; :func:`bell_operator` gives the same number the slow way.
    """
    rho = density(state)
    _check_sizes(cf, rho, s)
    t = correlation_tensor(rho)
    for b in s.bloch:
        # rows: identity, then one row per setting (0, bloch vector)
        v = np.zeros((b.shape[0] + 1, 4))
        v[0, 0] = 1
        v[1:, 1:] = b
        t = np.tensordot(t, v, axes=([0], [1]))
    return float(np.sum(coefficient_tensor(cf) * t))


def correlation_tensor(state) -> np.ndarray:
    """Real tensor ``T[mu_1..mu_n] = Tr(rho sigma_mu1 x ... x sigma_mun)``."""
    rho = density(state)
    n = rho.n
    t = rho.matrix.reshape((2,) * (2 * n))
    for m in range(n, 0, -1):
        # t axes: m row indices, m column indices, then the Pauli indices done so far
        t = np.tensordot(PAULI, t, axes=([1, 2], [m, 0]))
        t = np.moveaxis(t, 0, -1)
    return t.real.copy()


def _partial_trace_tensor(rho: DensityMatrix, keep: Sequence[int]) -> np.ndarray:
    n = rho.n
    t = rho.matrix.reshape((2,) * (2 * n))
    drop = [q for q in range(n) if q not in keep]
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = list(letters[:n])
    cols = list(letters[n : 2 * n])
    for q in drop:
        cols[q] = rows[q]
    out = "".join(rows[q] for q in keep) + "".join(cols[q] for q in keep)
    return np.einsum("".join(rows) + "".join(cols) + "->" + out, t).reshape(2 ** len(keep), 2 ** len(keep))


def reduced_state(state, keep: Sequence[int]) -> np.ndarray:
    """Partial trace of ``state`` onto the qubits ``keep`` (in that order)."""
    return _partial_trace_tensor(density(state), list(keep))


def entropy(matrix: np.ndarray) -> float:
    """Von Neumann entropy in bits, ``0 log 0 = 0``."""
    ev = np.linalg.eigvalsh(matrix)
    ev = ev[ev > 1e-15]
    return float(-(ev * np.log2(ev)).sum())


def avg_bipartite_entropy(state: PureState) -> float:
    """Mean entropy of every single qubit against the rest."""
    if not isinstance(state, PureState):
        rho = density(state)
        if not rho.is_pure():
            raise ValueError("average bipartite entropy needs a pure state")
    rho = density(state)
    if rho.n < 2:
        raise ValueError("need at least two qubits")
    return float(np.mean([entropy(reduced_state(rho, [q])) for q in range(rho.n)]))


def tangle_gghz(alpha: float) -> float:
    """Tangle ``4 alpha^2 beta^2`` of ``alpha|0..0> + beta|1..1>``."""
    if not 0 <= alpha <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    return 4 * alpha**2 * (1 - alpha**2)


def _term_probability(rho: DensityMatrix, s: SettingsAssignment, term, outcomes=None) -> float:
    n = rho.n
    eye = np.eye(2, dtype=complex)
    factors = [eye] * n
    for i, (p, x) in enumerate(term):
        a = 0 if outcomes is None else outcomes[i]
        factors[p] = s.observable(p, x).projector(a)
    return float(np.trace(rho.matrix @ _kron(factors)).real)


def behavior_of(state, s: SettingsAssignment) -> Behavior:
    """Behavior of measuring ``state`` with ``s`` (float coordinates)."""
    rho = density(state)
    scenario = BellScenario(s.settings)
    if rho.n != scenario.n_parties:
        raise ValueError(f"state has {rho.n} qubits, settings cover {scenario.n_parties} parties")
    return Behavior(scenario, tuple(_term_probability(rho, s, t) for t in scenario.terms))


def full_joint_of(state, s: SettingsAssignment) -> dict:
    """Full joint ``p(a | x)`` for every outcome and setting tuple."""
    rho = density(state)
    scenario = BellScenario(s.settings)
    joint = {}
    for xs in scenario.setting_tuples:
        term = tuple(enumerate(xs))
        for a in scenario.outcome_tuples:
            joint[(a, xs)] = _term_probability(rho, s, term, a)
    return joint


def save_amplitudes(state: PureState, path) -> None:
    """Write one ``re im`` pair per line."""
    with open(path, "w", encoding="ascii") as fh:
        for a in state.amplitudes:
            fh.write(f"{float(a.real)!r} {float(a.imag)!r}\n")


def load_amplitudes(path) -> PureState:
    values = []
    with open(path, encoding="ascii") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 're im'")
            values.append(complex(float(parts[0]), float(parts[1])))
    return PureState(np.array(values))


def basis_kets(n: int):
    return ["".join(b) for b in itertools.product("01", repeat=n)]
