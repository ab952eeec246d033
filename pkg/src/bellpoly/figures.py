"""Plot-data sweeps over one-parameter state families.

Every sweep returns a header and rows of floats; :func:`to_csv` renders
them with a dot decimal separator regardless of locale.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .facets import named_inequality
from .optimize import multistart_max
from .states import gg_class, gghz, gw_state

__all__ = ["FIGURES", "FAMILIES", "Sweep", "custom_sweep", "figure_sweep", "grid", "thread_count", "to_csv"]

FACET = ("I1", "I2", "I3")
FAMILIES = {
    "gg": gg_class,
    "gw": gw_state,
    # sin(beta)|000> + cos(beta)|111>
    "gghz": lambda alpha, beta: gghz(min(1.0, abs(math.sin(beta)))),
}
FIGURES = ("fig3", "fig4", "fig5", "fig6")
DEFAULT_ALPHAS = {"fig3": (math.pi / 6, math.pi / 4, math.pi / 3), "fig4": (math.pi / 6, math.pi / 4, math.pi / 3)}


@dataclass(frozen=True)
class Sweep:
    header: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]

    def column(self, name: str) -> np.ndarray:
        k = self.header.index(name)
        return np.array([r[k] for r in self.rows])


def thread_count() -> int:
    """Worker count from ``BELLPOLY_THREADS`` (default 1)."""
    raw = os.environ.get("BELLPOLY_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError(f"BELLPOLY_THREADS must be an integer, got {raw!r}") from exc
    return max(1, n)


def grid(points: int, lo: float = 0.0, hi: float = math.pi / 2) -> list[float]:
    if points < 2:
        raise ValueError("a grid needs at least 2 points")
    return [float(x) for x in np.linspace(lo, hi, points)]


def _best(names: Sequence[str], state, restarts: int, seed: int) -> float:
    return max(multistart_max(named_inequality(n), state, restarts, seed).value for n in names)


def _point(args) -> tuple[float, ...]:
    family, alpha, beta, groups, restarts, seed, scale = args
    state = FAMILIES[family](alpha, beta)
    return tuple(_best(g, state, restarts, seed) / scale for g in groups)


def _map(fn: Callable, jobs: list) -> list:
    workers = thread_count()
    if workers == 1 or len(jobs) == 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, jobs))


def custom_sweep(
    family: str,
    alphas: Sequence[float],
    points: int = 25,
    ineqs: Sequence[str] = FACET,
    restarts: int = 16,
    seed: int = 0,
    ratio: bool = False,
    lo: float = 0.0,
    hi: float = math.pi / 2,
) -> Sweep:
    """Best value over ``ineqs`` along ``beta`` for each ``alpha``."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; known: {', '.join(FAMILIES)}")
    scale = 2.0 if ratio else 1.0
    betas = grid(points, lo, hi)
    jobs = [(family, a, b, (tuple(ineqs),), restarts, seed, scale) for b in betas for a in alphas]
    out = _map(_point, jobs)
    rows = []
    for i, b in enumerate(betas):
        rows.append((b, *(out[i * len(alphas) + j][0] for j in range(len(alphas)))))
    name = "ratio" if ratio else "value"
    header = ("beta", *(f"{name}(alpha={a:.6f})" for a in alphas))
    return Sweep(header, tuple(rows))


def _comparison(family: str, alpha: float, points: int, restarts: int, seed: int) -> Sweep:
    betas = grid(points)
    groups = (FACET, ("Mermin",))
    jobs = [(family, alpha, b, groups, restarts, seed, 2.0) for b in betas]
    out = _map(_point, jobs)
    rows = tuple((b, *vals) for b, vals in zip(betas, out))
    return Sweep(("beta", "facet_ratio", "mermin_ratio"), rows)


def figure_sweep(
    figure: str, alpha: float | None = None, points: int = 25, restarts: int = 16, seed: int = 0
) -> Sweep:
    """Data for one of :data:`FIGURES`.

    fig3 and fig4 give the best of I1..I3 along ``beta`` for the GG and GW
    families at each ``alpha``; fig5 and fig6 give quantum-to-classical
    ratios of the facet family and of Mermin for ``sin b|000> + cos b|111>``
    and for the GW family at ``alpha`` (default pi/4).
    """
    if figure in ("fig3", "fig4"):
        alphas = DEFAULT_ALPHAS[figure] if alpha is None else (alpha,)
        return custom_sweep("gg" if figure == "fig3" else "gw", alphas, points, FACET, restarts, seed)
    if figure == "fig5":
        return _comparison("gghz", 0.0 if alpha is None else alpha, points, restarts, seed)
    if figure == "fig6":
        return _comparison("gw", math.pi / 4 if alpha is None else alpha, points, restarts, seed)
    raise ValueError(f"unknown figure {figure!r}; known: {', '.join(FIGURES)}")


def to_csv(sweep: Sweep) -> str:
    lines = [",".join(sweep.header)]
    for row in sweep.rows:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"
