"""Named three-qubit (and n-qubit) states, noise mixtures and state spec strings.

A spec string is ``name`` or ``name:key=value,key=value``, e.g.
``gghz:alpha=0.8`` or ``noisy-ghz:p=0.7,noise=white``.  Prefixing any pure
state name with ``noisy-`` mixes it with white (``1/2^n``) or colored noise
(the rank-5 mixture returned by :func:`colored_noise`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .quantum import DensityMatrix, PureState, white_noise

__all__ = [
    "STATE_NAMES",
    "StateSpec",
    "acin_canonical",
    "biseparable",
    "colored_noise",
    "ghz",
    "gg_class",
    "gghz",
    "gghz_n",
    "gs_state",
    "gw_state",
    "make_state",
    "noisy",
    "parse_state_spec",
    "sample_canonical_state",
    "w_state",
]

SQ = math.sqrt


def gghz(alpha: float, n: int = 3) -> PureState:
    """``alpha|0..0> + sqrt(1 - alpha^2)|1..1>``."""
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    amps = np.zeros(2**n)
    amps[0] = alpha
    amps[-1] = SQ(max(0.0, 1 - alpha**2))
    return PureState.from_amplitudes(amps, f"gghz(alpha={alpha})")


def gghz_n(alpha: float, n: int) -> PureState:
    if n < 2:
        raise ValueError("need n >= 2 qubits")
    return gghz(alpha, n)


def ghz(n: int = 3) -> PureState:
    return gghz(1 / SQ(2), n)


def w_state() -> PureState:
    return PureState.from_kets({"001": 1, "010": 1, "100": 1}, "w")


def gg_class(alpha: float, beta: float) -> PureState:
    """``sin a cos b |000> + sin a sin b |101> + cos a |111>``."""
    sa, ca = math.sin(alpha), math.cos(alpha)
    return PureState.from_kets(
        {"000": sa * math.cos(beta), "101": sa * math.sin(beta), "111": ca}, f"gg({alpha},{beta})"
    )


def gw_state(alpha: float, beta: float) -> PureState:
    """``sin a cos b |001> + sin a sin b |010> + cos a |100>``."""
    sa, ca = math.sin(alpha), math.cos(alpha)
    return PureState.from_kets(
        {"001": sa * math.cos(beta), "010": sa * math.sin(beta), "100": ca}, f"gw({alpha},{beta})"
    )


def gs_state(alpha: float, phi: float, beta: float | None = None) -> PureState:
    """``alpha|000> + beta|11>(cos phi|0> + sin phi|1>)``; beta defaults to ``sqrt(1-alpha^2)``."""
    if beta is None:
        if not 0 <= alpha <= 1:
            raise ValueError("alpha must lie in [0, 1]")
        beta = SQ(1 - alpha**2)
    return PureState.from_kets(
        {"000": alpha, "110": beta * math.cos(phi), "111": beta * math.sin(phi)}, f"gs({alpha},{phi})"
    )


def acin_canonical(lambdas, phi: float, tol: float = 0.0, check_domain: bool = True) -> PureState:
    """``l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>``.

    ``check_domain=False`` skips the nonvanishing conditions, which lets
    degenerate points such as ``(1, 0, 0, 0, 0)`` be built on purpose.

    Raises
    ------
    ValueError
        Outside the domain ``l_i >= 0``, ``l0 != 0``, ``l2 + l4 != 0``,
        ``l3 + l4 != 0``, ``phi`` in ``[0, pi]``.
    """
    lam = np.asarray(lambdas, dtype=float)
    if lam.shape != (5,) or np.any(lam < 0):
        raise ValueError("need five nonnegative lambdas")
    if abs(np.sum(lam**2) - 1) > 1e-9:
        raise ValueError("lambdas must satisfy sum(l_i^2) = 1")
    if check_domain and (lam[0] <= tol or lam[2] + lam[4] <= tol or lam[3] + lam[4] <= tol):
        raise ValueError("canonical form needs l0 != 0, l2 + l4 != 0 and l3 + l4 != 0")
    if not 0 <= phi <= math.pi:
        raise ValueError("phase must lie in [0, pi]")
    return PureState.from_kets(
        {
            "000": lam[0],
            "100": lam[1] * np.exp(1j * phi),
            "101": lam[2],
            "110": lam[3],
            "111": lam[4],
        },
        "acin",
    )


def sample_canonical_state(seed, tol: float = 1e-6) -> PureState:
    """Random canonical-form state: flat Dirichlet weights, uniform phase.

    Draws violating the domain conditions by less than ``tol`` are rejected
    and redrawn from the same stream.
    """
    rng = np.random.default_rng(seed)
    while True:
        lam = np.sqrt(rng.dirichlet(np.ones(5)))
        phi = rng.uniform(0, math.pi)
        if lam[0] > tol and lam[2] + lam[4] > tol and lam[3] + lam[4] > tol:
            return acin_canonical(lam, phi, tol)


def _bell_pair_state(i: int, j: int, n: int = 3) -> np.ndarray:
    amps = np.zeros(2**n)
    amps[0] = 1
    amps[(1 << (n - 1 - i)) | (1 << (n - 1 - j))] = 1
    return amps / SQ(2)


def biseparable(pair: tuple[int, int] = (1, 2)) -> PureState:
    """``|Phi+>`` on qubits ``pair`` with the remaining qubit in ``|0>``."""
    i, j = sorted(pair)
    return PureState(_bell_pair_state(i, j), f"bisep{i + 1}{j + 1}")


def _ghz_like(bits_a: str, bits_b: str, sign: int = 1) -> PureState:
    return PureState.from_kets({bits_a: 1, bits_b: sign})


def colored_noise() -> DensityMatrix:
    """Equal mixture of ``psi0+``, ``psi1+-`` and ``psi2+-``.

    ``psi0+ = (|000>+|111>)/sqrt2``, ``psi1+- = (|010> +- |101>)/sqrt2`` and
    ``psi2+- = (|100> +- |011>)/sqrt2``.
    """
    parts = [
        _ghz_like("000", "111"),
        _ghz_like("010", "101"),
        _ghz_like("010", "101", -1),
        _ghz_like("100", "011"),
        _ghz_like("100", "011", -1),
    ]
    return DensityMatrix(sum(p.matrix for p in parts) / 5, "col")


def noisy(base, p: float, noise: str = "white") -> DensityMatrix:
    """``p |psi><psi| + (1 - p) * noise``."""
    if not 0 <= p <= 1:
        raise ValueError(f"mixing weight must lie in [0, 1], got {p}")
    rho = base.density()
    if noise == "white":
        other = white_noise(rho.n)
    elif noise == "colored":
        if rho.n != 3:
            raise ValueError("colored noise is defined for three qubits")
        other = colored_noise()
    else:
        raise ValueError(f"unknown noise kind {noise!r}")
    return DensityMatrix(p * rho.matrix + (1 - p) * other.matrix, f"noisy({rho.label},p={p},{noise})")


def _fixed(kets: dict, label: str):
    return lambda: PureState.from_kets(kets, label)


_FIXED = {
    "ghz": lambda: ghz(3),
    "w": w_state,
    "gghz1": lambda: gghz(SQ(8 / 9)),
    "gghz2": lambda: gghz(SQ(25 / 29)),
    "gghz3": lambda: gghz(SQ(21 / 25)),
    "w1": _fixed({"001": SQ(1 / 6), "010": SQ(2 / 6), "100": SQ(3 / 6)}, "w1"),
    "wclass-a": _fixed({"001": SQ(1 / 6), "010": SQ(3 / 6), "100": SQ(2 / 6)}, "wclass-a"),
    "wclass-b": _fixed({"001": SQ(1 / 10), "010": SQ(4 / 10), "100": SQ(5 / 10)}, "wclass-b"),
    "ghz-class": _fixed(
        {"000": SQ(22 / 50), "100": SQ(3 / 50), "101": SQ(2 / 50), "110": SQ(21 / 50), "111": SQ(2 / 50)},
        "ghz-class",
    ),
    "product000": _fixed({"000": 1}, "product000"),
}

STATE_NAMES = tuple(sorted(list(_FIXED) + ["gghz", "gghzn", "gg", "gw", "gs", "acin", "bisep", "col", "noisy-<name>"]))


@dataclass(frozen=True)
class StateSpec:
    name: str
    params: dict = field(default_factory=dict)

    def __str__(self) -> str:
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(f"{k}={v}" for k, v in self.params.items())


def parse_state_spec(text: str) -> StateSpec:
    name, _, rest = text.strip().partition(":")
    params = {}
    for item in filter(None, (t.strip() for t in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise ValueError(f"state parameter {item!r} is not key=value")
        params[key.strip().lower()] = value.strip()
    return StateSpec(name.strip().lower(), params)


def _num(params: dict, key: str, default=None) -> float:
    if key not in params:
        if default is None:
            raise ValueError(f"missing state parameter {key!r}")
        return default
    return float(eval_number(params.pop(key)))


def eval_number(text) -> float:
    """Parse ``0.5``, ``pi/4``, ``1/sqrt2`` style numbers."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip().lower().replace("sqrt2", "sqrt(2)")
    allowed = {"pi": math.pi, "sqrt": math.sqrt}
    if not all(ch in "0123456789.+-*/()e " for ch in s.replace("pi", "").replace("sqrt", "")):
        raise ValueError(f"cannot parse number {text!r}")
    try:
        return float(eval(s, {"__builtins__": {}}, allowed))  # noqa: S307 - character-filtered
    except Exception as exc:
        raise ValueError(f"cannot parse number {text!r}") from exc


def make_state(spec):
    """Construct a :class:`PureState` or :class:`DensityMatrix` from a spec."""
    if isinstance(spec, str):
        spec = parse_state_spec(spec)
    name = spec.name
    params = dict(spec.params)
    if name.startswith("noisy-"):
        p = _num(params, "p")
        noise = params.pop("noise", "white")
        base = make_state(StateSpec(name[len("noisy-") :], params))
        if not isinstance(base, PureState):
            raise ValueError("noise is mixed into pure base states only")
        return noisy(base, p, noise)
    if name in _FIXED:
        state = _FIXED[name]()
    elif name == "gghz":
        state = gghz(_num(params, "alpha"), int(_num(params, "n", 3)))
    elif name == "gghzn":
        state = gghz_n(_num(params, "alpha"), int(_num(params, "n")))
    elif name == "gg":
        state = gg_class(_num(params, "alpha"), _num(params, "beta"))
    elif name == "gw":
        state = gw_state(_num(params, "alpha"), _num(params, "beta"))
    elif name == "gs":
        beta = _num(params, "beta") if "beta" in params else None
        state = gs_state(_num(params, "alpha"), _num(params, "phi"), beta)
    elif name == "acin":
        lam = [_num(params, f"l{i}") for i in range(5)]
        state = acin_canonical(lam, _num(params, "phi", 0.0))
    elif name == "bisep":
        pair = params.pop("pair", "23")
        state = biseparable((int(pair[0]) - 1, int(pair[1]) - 1))
    elif name == "col":
        state = colored_noise()
    else:
        raise ValueError(f"unknown state {spec.name!r}; known: {', '.join(STATE_NAMES)}")
    if params:
        raise ValueError(f"unused state parameters for {name!r}: {sorted(params)}")
    return state
