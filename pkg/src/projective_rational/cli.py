"""Command-line front end.

Exit codes: 0 success, 1 input or I/O error, 2 non-projective system
(``classify``), 3 degenerate boundary (``analyze ex3``).
"""

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__
from .analysis import (UNBOUNDED, Basin, Example2Params, Example3Case, Example3Params,
                       Example4Params, example2_limits, example2_system, example3_analyze,
                       example3_basin, example3_limits, example3_sweep, example3_system,
                       example4_limits, example4_system)
from .core import ProjectivityClass, SystemSpec, classify, step
from .dynamics import (DEFAULT_STEPS, DEFAULT_TOL, DEFAULT_WINDOW, Behavior, ConvergencePolicy,
                       LimitReport, check_conjugacy, detect_limit, iterate, orbit_csv,
                       relative_change)
from .errors import InsufficientData, ProjectiveSystemError
from .reduce import ReducedSystem, reduce
from .specfile import load_spec, write_spec

EXIT_OK, EXIT_INPUT, EXIT_NON_PROJECTIVE, EXIT_DEGENERATE = 0, 1, 2, 3

_MATCHED = {
    ProjectivityClass.HOMOGENEOUS: "alpha = 0 and A = 0",
    ProjectivityClass.LINEAR_TYPE: "alpha = 0, all A_i equal, all rows of B identical",
    ProjectivityClass.HYPERBOLIC_TYPE: "A = 0, all alpha_i equal, all rows of beta identical",
    ProjectivityClass.NON_PROJECTIVE: "no projective coefficient pattern",
}


@dataclass
class RunConfig:
    steps: int = DEFAULT_STEPS
    tol: float = DEFAULT_TOL
    window: int = DEFAULT_WINDOW
    pivot: Optional[int] = None
    seed: Optional[int] = None
    output: Optional[str] = None

    def __post_init__(self):
        if self.steps < 0:
            raise ValueError("--steps must be nonnegative")
        if not self.tol > 0:
            raise ValueError("--tol must be positive")
        if self.window < 1:
            raise ValueError("--window must be at least 1")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors share exit code 1 with other input errors; 2 is reserved
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _fmt(v) -> str:
    if v is UNBOUNDED:
        return "unbounded"
    if v is None:
        return "-"
    return format(float(v), ".17g")


def _jsonable(v):
    if v is UNBOUNDED:
        return "unbounded"
    if isinstance(v, (tuple, list)):
        return [_jsonable(e) for e in v]
    if isinstance(v, np.ndarray):
        return [float(e) for e in v]
    return v


def _emit(text: str, out=None):
    (out or sys.stdout).write(text if text.endswith("\n") else text + "\n")


def cmd_classify(args) -> int:
    spec, _ = load_spec(args.spec)
    cls = classify(spec)
    if args.json:
        _emit(json.dumps({"class": cls.value, "matched": _MATCHED[cls]}))
    else:
        _emit(f"{cls.value}\nmatched: {_MATCHED[cls]}")
    return EXIT_OK if cls.is_projective else EXIT_NON_PROJECTIVE


def cmd_reduce(args) -> int:
    spec, x0 = load_spec(args.spec)
    if isinstance(spec, ReducedSystem):
        raise UsageError("spec: already a reduced system")
    red = reduce(spec, args.pivot)
    _emit(f"# {red.kind.value}, pivot x{red.pivot}")
    _emit(red.render())
    if args.out:
        u0 = None if x0 is None else np.delete(x0, red.pivot - 1) / x0[red.pivot - 1]
        write_spec(args.out, red, u0)
    return EXIT_OK


def _random_x0(dim: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return 10.0 * (1.0 - rng.random(dim))


def _safe_detect(orbit, cfg: RunConfig):
    try:
        return detect_limit(orbit, cfg.tol, cfg.window)
    except InsufficientData:
        return LimitReport(Behavior.UNDECIDED, len(orbit) - 1, cfg.tol)


def _limit_text(report) -> str:
    lines = [f"behavior: {report.behavior.value}", f"steps_used: {report.steps_used}"]
    if report.limit is not None:
        lines.append("limit: " + " ".join(_fmt(v) for v in report.limit))
    if report.even is not None:
        lines.append("even: " + " ".join(_fmt(v) for v in report.even))
        lines.append("odd: " + " ".join(_fmt(v) for v in report.odd))
    if report.behavior is Behavior.DIVERGENT_COMPONENT:
        lines.append(f"to_infinity: {list(report.to_infinity)}")
        lines.append(f"to_zero: {list(report.to_zero)}")
    return "\n".join(lines)


def cmd_simulate(args) -> int:
    cfg = RunConfig(steps=args.steps, tol=args.tol, window=args.window, pivot=args.pivot,
                    seed=args.seed, output=args.out)
    system, x0 = load_spec(args.spec)
    dim = system.dim if isinstance(system, ReducedSystem) else system.k
    if args.x0 is not None:
        x0 = np.array(args.x0, dtype=float)
        if x0.shape != (dim,) or x0.min() <= 0:
            raise UsageError(f"x0: expected {dim} positive values")
    if x0 is None:
        if cfg.seed is None:
            raise UsageError("x0: no initial state in the spec file; pass --x0 or --seed")
        x0 = _random_x0(dim, cfg.seed)

    orbit = iterate(system, x0, cfg.steps)
    if isinstance(system, ReducedSystem):
        names = list(system.variable_names)
    else:
        names = [f"x{i}" for i in range(1, dim + 1)]
    csv_text = orbit_csv(orbit, names)
    report_stream = sys.stdout
    if cfg.output == "-":
        sys.stdout.write(csv_text)
        report_stream = sys.stderr
    elif cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(csv_text)

    report = _safe_detect(orbit, cfg)
    doc = {"limit": report.to_dict()}
    if orbit.breakdown is not None:
        doc["breakdown"] = {"step": orbit.breakdown.step, "cause": orbit.breakdown.cause.value}
    if (isinstance(system, SystemSpec) and system.k > 1 and classify(system).is_projective):
        conj = check_conjugacy(system, x0, cfg.pivot, cfg.steps, 1e-9)
        doc["conjugacy"] = conj.to_dict()

    if args.json:
        _emit(json.dumps(doc), report_stream)
    else:
        text = _limit_text(report)
        if "breakdown" in doc:
            text += f"\nbreakdown: n={doc['breakdown']['step']}, cause={doc['breakdown']['cause']}"
        if "conjugacy" in doc:
            c = doc["conjugacy"]
            text += (f"\nconjugacy max deviation: {c['max_deviation']:.3e} "
                     f"({'pass' if c['passed'] else 'FAIL'})")
        _emit(text, report_stream)
    return EXIT_OK


def _cross_check(system: SystemSpec, x0, cfg: RunConfig):
    orbit = iterate(system, x0, cfg.steps, until=ConvergencePolicy(cfg.tol, cfg.window))
    return orbit, _safe_detect(orbit, cfg)


def _analyze_ex2(args, cfg) -> tuple:
    p = Example2Params(C=args.C, A=args.A, D=args.D, beta=args.beta, alpha=args.alpha)
    lim = example2_limits(p)
    doc = {"example": "ex2", "limits": {"x": lim.x, "y": lim.y, "z": lim.z,
                                        "u": lim.u, "v": lim.v}}
    if args.x0 is not None:
        _, rep = _cross_check(example2_system(p), args.x0, cfg)
        doc["simulation"] = rep.to_dict()
        if rep.limit is not None:
            dev = float(relative_change(rep.limit, [lim.x, lim.y, lim.z]).max())
            doc["simulation"]["max_relative_deviation"] = dev
    return doc, EXIT_OK


def _analyze_ex3(args, cfg) -> tuple:
    p = Example3Params(alpha=args.alpha, A1=args.A1, A2=args.A2)
    res = example3_analyze(p)
    doc = {"example": "ex3", **res.to_dict()}
    if res.case is Example3Case.DEGENERATE_BOUNDARY:
        doc["diagnosis"] = ("P(w_m) vanishes within tolerance: P would have a single "
                            "(double) positive root, so basins are not resolved")
        return doc, EXIT_DEGENERATE

    x0 = None
    if args.x0 is not None:
        x0 = tuple(args.x0)
        w0 = (x0[0] + x0[1]) / x0[2]
    elif args.w0 is not None:
        w0 = args.w0
        x0 = (w0 / 2, w0 / 2, 1.0)
    else:
        return doc, EXIT_OK

    basin = example3_basin(res, w0)
    limits = example3_limits(res, w0)
    doc.update({"w0": w0, "basin": basin.value, "limits": _jsonable(limits)})
    if min(x0) > 0:
        system = example3_system(p)
        if basin is Basin.AT_W1:
            one = step(system, x0)
            doc["simulation"] = {"first_step": [float(v) for v in one],
                                 "max_relative_deviation": float(relative_change(one, limits).max())}
        else:
            _, rep = _cross_check(system, x0, cfg)
            doc["simulation"] = rep.to_dict()
            if basin is Basin.TO_W2 and rep.limit is not None:
                doc["simulation"]["max_relative_deviation"] = float(
                    relative_change(rep.limit, limits).max())
    return doc, EXIT_OK


def _analyze_ex4(args, cfg) -> tuple:
    p = Example4Params(A=args.A, B=args.B, C=args.C, D=args.D, z0=args.z0)
    lim = example4_limits(p)
    doc = {"example": "ex4", "u": lim.u, "v": lim.v,
           "limits": {"even": list(lim.even), "odd": list(lim.odd)},
           "period": 1 if lim.even == lim.odd else 2}
    if args.x0 is not None:
        x0 = (args.x0[0], args.x0[1], p.z0)
        _, rep = _cross_check(example4_system(p), x0, cfg)
        doc["simulation"] = rep.to_dict()
        if rep.even is not None:
            n = rep.steps_used
            dev = max(relative_change(rep.even, lim.even).max(),
                      relative_change(rep.odd, lim.odd).max())
            doc["simulation"]["max_relative_deviation"] = float(dev)
            doc["simulation"]["final_step"] = n
        elif rep.limit is not None:
            doc["simulation"]["max_relative_deviation"] = float(
                relative_change(rep.limit, lim.even).max())
    return doc, EXIT_OK


def _analysis_text(doc: dict) -> str:
    lines = []
    for key, value in doc.items():
        if isinstance(value, dict):
            lines.append(f"{key}:")
            lines.extend(f"  {k}: {_render(v)}" for k, v in value.items())
        else:
            lines.append(f"{key}: {_render(value)}")
    return "\n".join(lines)


def _render(v) -> str:
    if isinstance(v, float):
        return _fmt(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_render(e) for e in v) + "]"
    if isinstance(v, dict):
        return ", ".join(f"{k}={_render(e)}" for k, e in v.items())
    return str(v)


def cmd_analyze(args) -> int:
    cfg = RunConfig(steps=args.steps, tol=args.tol, window=args.window)
    handler = {"ex2": _analyze_ex2, "ex3": _analyze_ex3, "ex4": _analyze_ex4}[args.example]
    doc, code = handler(args, cfg)
    _emit(json.dumps(doc) if args.json else _analysis_text(doc))
    return code


def _axis(values, name: str, log: bool) -> list:
    if len(values) == 1:
        return [values[0]]
    if len(values) != 3 or values[2] != int(values[2]) or values[2] < 1:
        raise UsageError(f"{name}: expected VALUE or LO HI N")
    lo, hi, n = values[0], values[1], int(values[2])
    grid = np.geomspace(lo, hi, n) if log else np.linspace(lo, hi, n)
    return [float(v) for v in grid]


def sweep_csv(rows) -> str:
    out = ["alpha,A1,A2,case,w1,w2"]
    for a, A1, A2, case, w1, w2 in rows:
        out.append(",".join([_fmt(a), _fmt(A1), _fmt(A2), case.value,
                             "" if w1 is None else _fmt(w1), "" if w2 is None else _fmt(w2)]))
    return "\n".join(out) + "\n"


def cmd_sweep(args) -> int:
    axes = [_axis(v, n, args.log) for v, n in ((args.alpha, "alpha"), (args.A1, "A1"),
                                                 (args.A2, "A2"))]
    for name, axis in zip(("alpha", "A1", "A2"), axes):
        if min(axis) <= 0:
            raise UsageError(f"{name}: grid values must be positive")
    text = sweep_csv(example3_sweep(*axes, workers=args.workers))
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _run_options(p):
    p.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    p.add_argument("--json", action="store_true", help="print the report as JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="projrat", allow_abbrev=False,
        description="Classify, reduce and simulate projective rational difference systems.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", allow_abbrev=False, help="report the projective class")
    p.add_argument("spec")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("reduce", allow_abbrev=False, help="print the reduced system")
    p.add_argument("spec")
    p.add_argument("--pivot", type=int, default=None, help="1-based pivot index (default k)")
    p.add_argument("--out", help="also write the reduced system as a spec file")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("simulate", allow_abbrev=False, help="iterate and report the limit")
    p.add_argument("spec")
    p.add_argument("--x0", type=float, nargs="+")
    p.add_argument("--pivot", type=int, default=None)
    p.add_argument("--seed", type=int, default=None, help="draw x0 in (0, 10] when absent")
    p.add_argument("--out", help="orbit CSV path ('-' for stdout)")
    _run_options(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", allow_abbrev=False, help="closed-form analysis of an example")
    ex = p.add_subparsers(dest="example", required=True)
    e = ex.add_parser("ex2", allow_abbrev=False)
    for name in ("C", "A", "D", "beta", "alpha"):
        e.add_argument(f"--{name}", type=float, required=True)
    e.add_argument("--x0", type=float, nargs=3)
    _run_options(e)
    e = ex.add_parser("ex3", allow_abbrev=False)
    for name in ("alpha", "A1", "A2"):
        e.add_argument(f"--{name}", type=float, required=True)
    start = e.add_mutually_exclusive_group()
    start.add_argument("--w0", type=float)
    start.add_argument("--x0", type=float, nargs=3)
    _run_options(e)
    e = ex.add_parser("ex4", allow_abbrev=False)
    for name in ("A", "B", "C", "D"):
        e.add_argument(f"--{name}", type=float, required=True)
    e.add_argument("--z0", type=float, default=1.0)
    e.add_argument("--x0", type=float, nargs=2, help="x0 y0; z0 comes from --z0")
    _run_options(e)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", allow_abbrev=False, help="grid sweep of the cubic case analysis")
    for name in ("alpha", "A1", "A2"):
        p.add_argument(f"--{name}", type=float, nargs="+", required=True,
                       metavar="V", help="VALUE or LO HI N")
    p.add_argument("--log", action="store_true", help="log-spaced axes")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ProjectiveSystemError, UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
