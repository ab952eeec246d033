"""Maximizing Bell expectations over qubit measurement settings.

The expectation of a correlator form is affine in each observable's Bloch
vector, ``value = v . n + const``, so the see-saw sets ``n = v / |v|`` for
one party at a time.  All settings of a party enter through disjoint terms,
so a party's settings are updated together; each update is an exact block
maximization and the value never decreases.

Restarts are run as one batch over the correlation tensor of the state.
Restart ``i`` of master seed ``s`` draws its initial settings from
``numpy.random.default_rng([s, i])`` and is frozen once it converges, so its
trajectory does not depend on how many other restarts run with it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .facets import CorrelatorForm
from .quantum import SettingsAssignment, coefficient_tensor, correlation_tensor, density
from .states import noisy

__all__ = [
    "BestOf",
    "NoiseFamily",
    "OptimizationResult",
    "ThresholdResult",
    "best_of",
    "find_violation",
    "coefficient_tensor",
    "gghz_analytic",
    "multistart_max",
    "noise_threshold",
    "general_family_settings",
    "fixed_family_settings",
    "qc_ratio",
    "random_settings",
    "seesaw",
]

DEFAULT_RESTARTS = 64
MAX_SWEEPS = 500
IMPROVEMENT_TOL = 1e-10
DEGENERATE_FIELD = 1e-12


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    value: float
    settings: SettingsAssignment
    restarts: int
    iterations: int
    converged: bool
    history: tuple = field(default=(), repr=False)
    values: tuple = field(default=(), repr=False)


class _Batch:
    """Einsum plumbing for a batch of settings on one state."""

    def __init__(self, cf: CorrelatorForm, state):
        rho = density(state)
        n = cf.scenario.n_parties
        if rho.n != n:
            raise ValueError(f"state has {rho.n} qubits, inequality needs {n}")
        self.n = n
        self.settings = cf.scenario.settings
        # single-setting parties last: updated first they can zero the fields of the rest
        self.update_order = sorted(range(n), key=lambda p: (-self.settings[p], p))
        # merge coefficient and correlation tensors: K[(s1, mu1), ..., (sn, mun)]
        g = coefficient_tensor(cf)
        t = correlation_tensor(rho)
        k = np.multiply.outer(g, t)
        order = [ax for p in range(n) for ax in (p, n + p)]
        self.k = np.transpose(k, order).reshape([(m + 1) * 4 for m in self.settings])

    def local(self, bloch: Sequence[np.ndarray]) -> list[np.ndarray]:
        """Per-party arrays ``L[r, s, mu]`` flattened to ``(R, (m+1)*4)``."""
        out = []
        for p, b in enumerate(bloch):
            r = b.shape[0]
            lv = np.zeros((r, self.settings[p] + 1, 4))
            lv[:, 0, 0] = 1
            lv[:, 1:, 1:] = b
            out.append(lv.reshape(r, -1))
        return out

    def contract(self, locs: list[np.ndarray], skip: int | None = None) -> np.ndarray:
        order = [p for p in range(self.n) if p != skip]
        first = order[0]
        x = np.tensordot(locs[first], self.k, axes=([1], [first]))
        axes = [p for p in range(self.n) if p != first]
        for p in order[1:]:
            pos = axes.index(p) + 1
            x = np.moveaxis(x, pos, 1)
            x = np.einsum("ri...,ri->r...", x, locs[p])
            axes.remove(p)
        return x

    def values(self, bloch) -> np.ndarray:
        return self.contract(self.local(bloch))

    def field(self, bloch, party: int) -> np.ndarray:
        w = self.contract(self.local(bloch), skip=party)
        return w.reshape(w.shape[0], self.settings[party] + 1, 4)[:, 1:, 1:]


def _run(
    cf: CorrelatorForm,
    state,
    bloch: list[np.ndarray],
    max_sweeps: int = MAX_SWEEPS,
    tol: float = IMPROVEMENT_TOL,
    record: bool = False,
    stop_above: float | None = None,
):
    batch = _Batch(cf, state)
    bloch = [np.array(b, dtype=float) for b in bloch]
    r = bloch[0].shape[0]
    value = batch.values(bloch)
    active = np.ones(r, dtype=bool)
    sweeps = np.zeros(r, dtype=int)
    history = [value.copy()] if record else None
    for _ in range(max_sweeps):
        if not active.any():
            break
        if stop_above is not None and value.max() > stop_above:
            break
        idx = np.flatnonzero(active)
        sub = [b[idx] for b in bloch]
        for p in batch.update_order:
            v = batch.field(sub, p)
            norm = np.linalg.norm(v, axis=-1, keepdims=True)
            ok = norm > DEGENERATE_FIELD
            sub[p] = np.where(ok, v / np.where(ok, norm, 1), sub[p])
        new = batch.values(sub)
        for b, s in zip(bloch, sub):
            b[idx] = s
        gain = new - value[idx]
        value[idx] = new
        sweeps[idx] += 1
        active[idx[gain < tol]] = False
        if record:
            history.append(value.copy())
    return bloch, value, sweeps, ~active, history


def _as_bloch(s: SettingsAssignment, r: int = 1) -> list[np.ndarray]:
    return [np.broadcast_to(b, (r,) + b.shape).copy() for b in s.bloch]


def seesaw(
    cf: CorrelatorForm,
    state,
    init: SettingsAssignment,
    max_sweeps: int = MAX_SWEEPS,
    tol: float = IMPROVEMENT_TOL,
    record: bool = False,
) -> OptimizationResult:
    """See-saw ascent from ``init`` until a sweep improves by less than ``tol``."""
    if not init.fits(cf.scenario):
        raise ValueError(f"settings {init.settings} do not match scenario {cf.scenario}")
    bloch, value, sweeps, done, history = _run(cf, state, _as_bloch(init), max_sweeps, tol, record)
    best = SettingsAssignment(tuple(b[0] for b in bloch))
    hist = tuple(float(h[0]) for h in history) if record else ()
    return OptimizationResult(float(value[0]), best, 1, int(sweeps[0]), bool(done[0]), hist, (float(value[0]),))


def random_settings(settings: Sequence[int], rng: np.random.Generator) -> list[np.ndarray]:
    """Bloch vectors uniform on the sphere, one ``(m, 3)`` array per party."""
    out = []
    for m in settings:
        v = rng.normal(size=(m, 3))
        out.append(v / np.linalg.norm(v, axis=1, keepdims=True))
    return out


def multistart_max(
    cf: CorrelatorForm,
    state,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    extra_inits: Sequence[SettingsAssignment] = (),
    max_sweeps: int = MAX_SWEEPS,
    record: bool = False,
    stop_above: float | None = None,
) -> OptimizationResult:
    """Best see-saw result over ``restarts`` random starts plus ``extra_inits``.

    With ``stop_above`` set, the batch stops as soon as one restart exceeds
    it; the value is then only a certified lower bound on the optimum.
    """
    if restarts < 1:
        raise ValueError("need at least one restart")
    settings = cf.scenario.settings
    starts = [random_settings(settings, np.random.default_rng([seed, i])) for i in range(restarts)]
    starts += [[np.array(b) for b in s.bloch] for s in extra_inits]
    bloch = [np.stack([s[p] for s in starts]) for p in range(len(settings))]
    bloch, value, sweeps, done, history = _run(cf, state, bloch, max_sweeps, record=record, stop_above=stop_above)
    i = int(np.argmax(value))
    best = SettingsAssignment(tuple(b[i] for b in bloch))
    hist = tuple(h.copy() for h in history) if record else ()
    return OptimizationResult(
        float(value[i]), best, len(starts), int(sweeps[i]), bool(done[i]), hist, tuple(float(v) for v in value)
    )


# --- analytic family -----------------------------------------------------------


def fixed_family_settings(theta: float, n: int = 3) -> SettingsAssignment:
    """``A1 = z, A2 = x, B1 = cos t x + sin t z, B2 = -cos t x + sin t z``, others ``x``."""
    x = np.array([1.0, 0.0, 0.0])
    z = np.array([0.0, 0.0, 1.0])
    c, s = math.cos(theta), math.sin(theta)
    parties = [np.array([z, x]), np.array([c * x + s * z, -c * x + s * z])]
    parties += [np.array([x])] * (n - 2)
    return SettingsAssignment(tuple(parties))


def general_family_settings(angles: Sequence[float]) -> SettingsAssignment:
    """General family: ``(ta1, pa1, ta2, pa2, tb1, pb1, tb2, pb2, pc1)`` with ``C1`` equatorial."""
    ta1, pa1, ta2, pa2, tb1, pb1, tb2, pb2, pc1 = angles
    return SettingsAssignment.from_angles(
        [[(ta1, pa1), (ta2, pa2)], [(tb1, pb1), (tb2, pb2)], [(math.pi / 2, pc1)]]
    )


@dataclass(frozen=True)
class AnalyticGGHZ:
    value: float
    theta: float
    violation: bool
    note: str = ""


def gghz_analytic(alpha: float) -> AnalyticGGHZ:
    """Maximum of ``2 sin t + 4 a b cos t`` over ``t`` for ``a|000> + b|111>``."""
    if not 0 <= alpha <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    beta = math.sqrt(1 - alpha**2)
    c = 2 * alpha * beta
    root = math.sqrt(1 + c * c)
    theta = math.atan2(1 / root, c / root)
    if alpha in (0.0, 1.0):
        return AnalyticGGHZ(2.0, theta, False, "no violation (product state)")
    return AnalyticGGHZ(2 * root, theta, True)


# --- comparisons -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BestOf:
    value: float
    argmax: str
    values: dict
    results: dict = field(repr=False, default_factory=dict)


def best_of(
    ineqs: Sequence[CorrelatorForm], state, restarts: int = DEFAULT_RESTARTS, seed: int = 0, extra_inits: dict | None = None
) -> BestOf:
    """Optimize every inequality on ``state`` and report the largest value."""
    if not ineqs:
        raise ValueError("need at least one inequality")
    results = {}
    for k, cf in enumerate(ineqs):
        name = cf.name or f"#{k}"
        extra = (extra_inits or {}).get(name, ())
        results[name] = multistart_max(cf, state, restarts, seed, extra_inits=extra)
    name = max(results, key=lambda k: results[k].value)
    return BestOf(results[name].value, name, {k: r.value for k, r in results.items()}, results)


def find_violation(
    ineqs: Sequence[CorrelatorForm],
    state,
    restarts: int = 16,
    seed: int = 0,
    margin: float = 1e-6,
    escalate: int = 2,
) -> tuple[str, float] | None:
    """First inequality found with value above ``bound + margin``, or None.

    Restarts are multiplied by 4 up to ``escalate`` times before giving up.
    """
    for level in range(escalate + 1):
        for k, cf in enumerate(ineqs):
            target = float(cf.bound) + margin
            res = multistart_max(cf, state, restarts * 4**level, seed, stop_above=target)
            if res.value > target:
                return cf.name or f"#{k}", res.value
    return None


def qc_ratio(ineqs: Sequence[CorrelatorForm], state, restarts: int = DEFAULT_RESTARTS, seed: int = 0) -> float:
    """Best value over ``ineqs`` divided by the classical bound 2."""
    return best_of(ineqs, state, restarts, seed).value / 2


# --- noise thresholds ----------------------------------------------------------


@dataclass(frozen=True)
class NoiseFamily:
    base: object
    noise: str = "white"

    def __post_init__(self):
        if self.noise not in ("white", "colored"):
            raise ValueError(f"unknown noise kind {self.noise!r}")
        self.at(1.0)

    def at(self, p: float):
        return noisy(self.base, p, self.noise)


@dataclass(frozen=True)
class ThresholdResult:
    p: float | None
    bracket: tuple[float, float] | None
    pure_max: float
    closed_form: float | None
    evaluations: int
    method: str

    @property
    def found(self) -> bool:
        return self.p is not None


def noise_threshold(
    fam: NoiseFamily,
    ineqs: CorrelatorForm | Sequence[CorrelatorForm],
    tol: float = 1e-3,
    restarts: int = 16,
    seed: int = 0,
    step: float = 0.02,
    margin: float = 1e-6,
) -> ThresholdResult:
    """Smallest mixing weight at which the optimized value exceeds the bound.

    The reported ``p`` is the midpoint of the final bisection bracket
    ``(a, b)``: no violation was found at ``a``, one was found at ``b``.

    ``ineqs`` may be a list, in which case the best inequality counts at
    every ``p``.  Settings are re-optimized at every ``p``; the optimum at the
    previous grid point and the pure-state optimum seed extra starts.
    """
    if tol < 1e-4:
        raise ValueError("threshold tolerance must be >= 1e-4")
    forms = [ineqs] if isinstance(ineqs, CorrelatorForm) else list(ineqs)
    warm: dict[int, list] = {k: [] for k in range(len(forms))}
    evaluations = 0

    def excess(p: float) -> float:
        nonlocal evaluations
        evaluations += 1
        rho = fam.at(p)
        best = -math.inf
        for k, cf in enumerate(forms):
            target = float(cf.bound) + margin
            res = multistart_max(cf, rho, restarts, seed, extra_inits=warm[k][-2:], stop_above=target)
            warm[k].append(res.settings)
            best = max(best, res.value - float(cf.bound))
            if best > margin:
                break
        return best

    pure = [multistart_max(cf, fam.at(1.0), restarts, seed) for cf in forms]
    for k, res in enumerate(pure):
        warm[k].append(res.settings)
    evaluations += 1
    pure_excess = max(r.value - float(cf.bound) for r, cf in zip(pure, forms))
    pure_max = max(r.value for r in pure)
    closed = None
    if fam.noise == "white" and all(cf.constant == 0 for cf in forms):
        # white noise kills every correlator, so the optimum scales linearly in p
        k = max(range(len(forms)), key=lambda i: pure[i].value / float(forms[i].bound))
        if pure[k].value > 0:
            closed = float(forms[k].bound) / pure[k].value
    if pure_excess <= margin:
        return ThresholdResult(None, None, pure_max, closed, evaluations, "no threshold: no violation at p=1")
    lo, hi = 0.0, None
    p = 0.0
    while p < 1.0:
        if excess(p) > margin:
            hi = p
            break
        lo = p
        p = round(min(1.0, p + step), 12)
    if hi is None:
        hi = 1.0
    if hi == 0.0:
        return ThresholdResult(0.0, (0.0, 0.0), pure_max, closed, evaluations, "violated at p=0")
    a, b = lo, hi
    while b - a > tol:
        mid = (a + b) / 2
        if excess(mid) > margin:
            b = mid
        else:
            a = mid
    # midpoint of the final bracket: within tol / 2 of the crossing
    return ThresholdResult((a + b) / 2, (a, b), pure_max, closed, evaluations, f"scan(step={step})+bisect(tol={tol})")
