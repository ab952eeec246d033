"""Command-line front end.

Exit codes: 0 success, 1 a reproduction check failed, 2 a capacity cap was
hit, 3 bad input.  Every error is reported on stderr as one line of the form
``error code=<n> kind=<kind>: <message>``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path

from . import figures, reproduce
from .facets import build_catalog, load_catalog, named_inequality, to_correlator_form
from .optimize import DEFAULT_RESTARTS, NoiseFamily, best_of, noise_threshold
from .quantum import PureState
from .scenario import PARTY_LETTERS, CapacityError, parse_settings
from .states import StateSpec, make_state, parse_state_spec

EXIT_OK, EXIT_REPRO, EXIT_CAPACITY, EXIT_SPEC = 0, 1, 2, 3
FORMATS = ("json", "csv", "text")


class SpecError(ValueError):
    """Invalid command-line input."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SpecError(message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    settings: str | None = None
    state: str | None = None
    ineq: str | None = None
    catalog: str | None = None
    facet: int | None = None
    noise: str | None = None
    seed: int = 0
    restarts: int = DEFAULT_RESTARTS
    tol: float = 1e-3
    out: str | None = None
    format: str = "text"

    def __post_init__(self):
        if self.format not in FORMATS:
            raise SpecError(f"unknown format {self.format!r}")
        if self.restarts < 1:
            raise SpecError("--restarts must be >= 1")
        if self.tol < 1e-4:
            raise SpecError("--tol must be >= 1e-4")

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        known = set(cls.__dataclass_fields__)
        values = {k: v for k, v in vars(ns).items() if k in known and v is not None}
        return cls(**values)


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _inequalities(cfg: RunConfig) -> list:
    if cfg.catalog:
        try:
            _, facets, _ = load_catalog(Path(cfg.catalog).read_text(encoding="utf-8"))
        except OSError as exc:
            raise SpecError(f"cannot read catalog: {exc}") from exc
        index = 0 if cfg.facet is None else cfg.facet
        if not 0 <= index < len(facets):
            raise SpecError(f"facet index {index} out of range 0..{len(facets) - 1}")
        cf = to_correlator_form(facets[index])
        return [type(cf)(cf.scenario, cf.terms, cf.bound, cf.constant, f"facet{index}")]
    if not cfg.ineq:
        raise SpecError("need --ineq or --catalog")
    names = []
    for item in cfg.ineq.split(","):
        item = item.strip()
        names += ["I1", "I2", "I3"] if item.lower() == "facet" else [item]
    try:
        return [named_inequality(n) for n in names]
    except KeyError as exc:
        raise SpecError(exc.args[0]) from exc


def _state(text: str):
    try:
        return make_state(text)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc


def _settings_report(settings) -> list[dict]:
    rows = []
    for p, party in enumerate(settings.angles()):
        for x, (theta, phi) in enumerate(party):
            rows.append({"observable": f"{PARTY_LETTERS[p]}{x + 1}", "theta": theta, "phi": phi})
    return rows


def cmd_facets(cfg: RunConfig) -> int:
    if not cfg.settings:
        raise SpecError("need --settings")
    try:
        scenario = parse_settings(cfg.settings)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc
    cat = build_catalog(scenario)
    doc = cat.to_json()
    if cfg.out:
        write_atomic(cfg.out, doc)
        print(cat.summary())
    elif cfg.format == "json":
        sys.stdout.write(doc)
    else:
        print(cat.summary())
    return EXIT_OK


def cmd_optimize(cfg: RunConfig) -> int:
    if not cfg.state:
        raise SpecError("need --state")
    forms = _inequalities(cfg)
    state = _state(cfg.state)
    for cf in forms:
        if cf.scenario.n_parties != state.n:
            raise SpecError(f"{cf.name} needs {cf.scenario.n_parties} qubits, state has {state.n}")
    best = best_of(forms, state, restarts=cfg.restarts, seed=cfg.seed)
    res = best.results[best.argmax]
    bound = float(next(cf.bound for cf in forms if cf.name == best.argmax))
    converged = sum(1 for v in res.values if v >= res.value - 1e-6)
    report = {
        "state": cfg.state,
        "inequality": best.argmax,
        "value": best.value,
        "bound": bound,
        "violation": best.value > bound + 1e-6,
        "values": best.values,
        "restarts": res.restarts,
        "iterations": res.iterations,
        "converged": res.converged,
        "restarts_at_best": converged,
        "seed": cfg.seed,
        "settings": _settings_report(res.settings),
    }
    if cfg.format == "json":
        _emit(json.dumps(report, indent=1) + "\n", cfg.out)
        return EXIT_OK
    lines = [
        f"value={best.value:.6f} bound={bound:g} violation={str(report['violation']).lower()} "
        f"ineq={best.argmax} restarts={res.restarts} at_best={converged} iterations={res.iterations}"
    ]
    if len(forms) > 1:
        lines.append("values " + " ".join(f"{k}={v:.6f}" for k, v in best.values.items()))
    for s in report["settings"]:
        lines.append(f"{s['observable']} theta={s['theta']:.6f} phi={s['phi']:.6f}")
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def _family(cfg: RunConfig) -> NoiseFamily:
    spec = parse_state_spec(cfg.state)
    noise = cfg.noise
    if spec.name.startswith("noisy-"):
        params = dict(spec.params)
        if "p" in params:
            raise SpecError("a threshold family takes no p; it is what is being searched")
        noise = params.pop("noise", noise)
        spec = StateSpec(spec.name[len("noisy-") :], params)
    base = _state(str(spec))
    if not isinstance(base, PureState):
        raise SpecError("the base state of a noise family must be pure")
    try:
        return NoiseFamily(base, noise or "white")
    except ValueError as exc:
        raise SpecError(str(exc)) from exc


def cmd_threshold(cfg: RunConfig) -> int:
    if not cfg.state:
        raise SpecError("need --state")
    fam = _family(cfg)
    forms = _inequalities(cfg)
    res = noise_threshold(fam, forms, tol=cfg.tol, restarts=cfg.restarts, seed=cfg.seed)
    report = {
        "state": cfg.state,
        "noise": fam.noise,
        "inequalities": [cf.name for cf in forms],
        "threshold": res.p,
        "found": res.found,
        "bracket": res.bracket,
        "pure_max": res.pure_max,
        "closed_form": res.closed_form,
        "method": res.method,
        "evaluations": res.evaluations,
    }
    if cfg.format == "json":
        _emit(json.dumps(report, indent=1) + "\n", cfg.out)
        return EXIT_OK
    head = f"p*={res.p:.3f}" if res.found else "p*=none no threshold"
    lines = [f"{head} method={res.method} pure_max={res.pure_max:.6f} evaluations={res.evaluations}"]
    if res.found and res.closed_form is not None:
        lines.append(f"closed_form={res.closed_form:.6f} (white noise: bound / pure max)")
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, ns: argparse.Namespace) -> int:
    try:
        if ns.figure == "custom":
            alphas = ns.alpha if ns.alpha else [math.pi / 4]
            ineqs = (ns.ineqs or "facet").split(",")
            names = sum((["I1", "I2", "I3"] if n.lower() == "facet" else [n] for n in ineqs), [])
            sweep = figures.custom_sweep(
                ns.family, alphas, ns.points, names, cfg.restarts, cfg.seed, ratio=ns.ratio, lo=ns.lo, hi=ns.hi
            )
        else:
            if ns.alpha and len(ns.alpha) > 1:
                raise SpecError(f"{ns.figure} takes one --alpha")
            alpha = ns.alpha[0] if ns.alpha else None
            sweep = figures.figure_sweep(ns.figure, alpha, ns.points, cfg.restarts, cfg.seed)
    except (ValueError, KeyError) as exc:
        raise SpecError(str(exc.args[0] if exc.args else exc)) from exc
    if cfg.format == "json":
        text = json.dumps({"header": sweep.header, "rows": sweep.rows}, indent=1) + "\n"
    else:
        text = figures.to_csv(sweep)
    _emit(text, cfg.out)
    return EXIT_OK


def cmd_reproduce(cfg: RunConfig, ns: argparse.Namespace) -> int:
    if ns.target == "counts":
        rows = reproduce.check_counts()
    elif ns.target == "table1":
        rows = reproduce.check_table1(restarts=ns.restarts or 16, seed=cfg.seed, tol=cfg.tol)
    else:
        rows = reproduce.check_sweep_states(ns.n, ns.seed if ns.seed is not None else 1, ns.restarts or 16)
    failed = [r for r in rows if not r.passed]
    if cfg.format == "json":
        text = json.dumps({"target": ns.target, "rows": [r.as_dict() for r in rows], "failed": len(failed)}, indent=1)
        _emit(text + "\n", cfg.out)
    else:
        lines = [r.line() for r in rows]
        lines.append(f"{len(rows) - len(failed)}/{len(rows)} rows pass")
        _emit("\n".join(lines) + "\n", cfg.out)
    for r in failed:
        print(f"- {r.name}: expected {r.reference}", file=sys.stderr)
        print(f"+ {r.name}: got {r.computed}", file=sys.stderr)
    return EXIT_REPRO if failed else EXIT_OK


def _float(text: str) -> float:
    from .states import eval_number

    try:
        return eval_number(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bellpoly", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, restarts=True):
        p.add_argument("--seed", type=int, default=None)
        if restarts:
            p.add_argument("--restarts", type=int, default=None)
        p.add_argument("--out", default=None, help="write the output here (atomic rename)")
        p.add_argument("--format", choices=FORMATS, default="text")

    p = sub.add_parser("facets", help="enumerate and classify local-polytope facets")
    p.add_argument("--settings", required=True, help="settings per party, e.g. 2,2,1")
    common(p, restarts=False)

    for name, helptext in (("optimize", "maximize a Bell expectation"), ("threshold", "noise threshold")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--state", required=True, help="state spec, e.g. gghz:alpha=0.8")
        p.add_argument("--ineq", help="I1, I2, I3, Mermin, Svetlichny, CHSH, facet, or a comma list")
        p.add_argument("--catalog", help="facet catalog JSON to take the inequality from")
        p.add_argument("--facet", type=int, help="facet index within --catalog (default 0)")
        if name == "threshold":
            p.add_argument("--noise", choices=("white", "colored"), default=None)
            p.add_argument("--tol", type=float, default=None)
        common(p)

    p = sub.add_parser("sweep", help="figure plot data as CSV")
    p.add_argument("figure", choices=(*figures.FIGURES, "custom"))
    p.add_argument("--alpha", type=_float, action="append", help="family parameter (repeatable for custom)")
    p.add_argument("--points", type=int, default=25)
    p.add_argument("--family", choices=tuple(figures.FAMILIES), default="gg")
    p.add_argument("--ineqs", default=None, help="comma list for custom sweeps (default facet)")
    p.add_argument("--ratio", action="store_true", help="report value / 2")
    p.add_argument("--lo", type=_float, default=0.0)
    p.add_argument("--hi", type=_float, default=math.pi / 2)
    common(p)

    p = sub.add_parser("reproduce", help="recompute reference numbers with pass/fail per row")
    p.add_argument("target", choices=("counts", "table1", "sweep-states"))
    p.add_argument("--n", type=int, default=500)
    common(p)
    return parser


def _fail(code: int, kind: str, message: str) -> int:
    message = " ".join(str(message).split())
    print(f"error code={code} kind={kind}: {message}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.command == "sweep" and ns.restarts is None:
            ns.restarts = 16
        cfg = RunConfig.from_args(ns)
        if ns.command == "facets":
            return cmd_facets(cfg)
        if ns.command == "optimize":
            return cmd_optimize(cfg)
        if ns.command == "threshold":
            if ns.restarts is None:
                cfg = RunConfig(**{**asdict(cfg), "restarts": 16})
            return cmd_threshold(cfg)
        if ns.command == "sweep":
            return cmd_sweep(cfg, ns)
        return cmd_reproduce(cfg, ns)
    except SpecError as exc:
        return _fail(EXIT_SPEC, "spec", exc)
    except CapacityError as exc:
        return _fail(EXIT_CAPACITY, "capacity", exc)
    except (ValueError, KeyError) as exc:
        return _fail(EXIT_SPEC, "spec", exc.args[0] if exc.args else exc)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
