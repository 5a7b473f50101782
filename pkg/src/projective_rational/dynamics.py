"""Orbit iteration, asymptotic-behaviour detection and conjugacy checks."""

import io
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np

from .core import BreakdownCause, SystemSpec, classify
from .errors import InsufficientData, NotProjective, OrbitBreakdown
from .reduce import ReducedSystem, project, reduce

DEFAULT_STEPS = 10_000
DEFAULT_TOL = 1e-10
DEFAULT_WINDOW = 10
DIVERGENCE_HIGH = 1e150
DIVERGENCE_LOW = 1e-150

System = Union[SystemSpec, ReducedSystem]


def relative_change(a, b) -> np.ndarray:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return np.abs(a - b) / np.maximum(np.maximum(np.abs(a), np.abs(b)), 1e-30)


@dataclass(frozen=True)
class Breakdown:
    step: int
    cause: BreakdownCause


@dataclass(frozen=True, eq=False)
class Orbit:
    """Finite trajectory; ``states[n]`` is the state at time ``n``.

    When iteration stopped because the next state could not be formed,
    ``breakdown.step`` is the index of that missing state.
    """

    states: np.ndarray
    system: Optional[System] = None
    breakdown: Optional[Breakdown] = None
    stopped_on_convergence: bool = False

    def __len__(self):
        return self.states.shape[0]

    @property
    def dim(self) -> int:
        return self.states.shape[1]


@dataclass(frozen=True)
class ConvergencePolicy:
    tol: float = DEFAULT_TOL
    window: int = DEFAULT_WINDOW


def iterate(system: System, x0: Sequence[float], n_steps: int,
            until: Optional[ConvergencePolicy] = None) -> Orbit:
    """Iterate ``system`` from ``x0`` for up to ``n_steps`` steps.

    Breakdowns truncate the orbit and are recorded rather than raised. If
    ``until`` is given, iteration also stops as soon as the tail of the orbit
    would be reported as a fixed point or 2-cycle under that policy.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be nonnegative")
    x = np.array(x0, dtype=float)
    if x.ndim != 1 or not np.all(np.isfinite(x)) or x.min() <= 0:
        raise ValueError("initial state must be a vector of positive finite reals")
    states = np.empty((n_steps + 1, x.shape[0]))
    states[0] = x
    breakdown = None
    converged = False
    point_run = pair_run = 0
    n = 0
    # overflow is reported as a breakdown, not as a numpy warning
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, n_steps + 1):
            try:
                x = system.apply(x)
            except OrbitBreakdown as exc:
                breakdown = Breakdown(n, exc.cause)
                n -= 1
                break
            states[n] = x
            if until is not None:
                near = relative_change(x, states[n - 1]).max() < until.tol
                point_run = point_run + 1 if near else 0
                if n >= 2:
                    near = relative_change(x, states[n - 2]).max() < until.tol
                    pair_run = pair_run + 1 if near else 0
                if (n >= 2 * until.window + 1
                        and (point_run >= until.window or pair_run >= 2 * until.window)):
                    converged = True
                    break
    states = states[:n + 1].copy()
    states.setflags(write=False)
    return Orbit(states, system, breakdown, converged)


class Behavior(Enum):
    CONVERGED_POINT = "ConvergedPoint"
    CONVERGED_PERIOD2 = "ConvergedPeriod2"
    DIVERGENT_COMPONENT = "DivergentComponent"
    UNDECIDED = "Undecided"


@dataclass(frozen=True, eq=False)
class LimitReport:
    """Detected asymptotic behaviour of an orbit.

    ``limit`` is set for a fixed point, ``even``/``odd`` (values at even and
    odd times) for a 2-cycle, and ``to_infinity``/``to_zero`` (1-based
    component numbers) for divergence.
    """

    behavior: Behavior
    steps_used: int
    tolerance: float
    limit: Optional[np.ndarray] = None
    even: Optional[np.ndarray] = None
    odd: Optional[np.ndarray] = None
    to_infinity: tuple = ()
    to_zero: tuple = ()

    def to_dict(self) -> dict:
        d = {"behavior": self.behavior.value, "steps_used": self.steps_used,
             "tolerance": self.tolerance}
        for name in ("limit", "even", "odd"):
            value = getattr(self, name)
            if value is not None:
                d[name] = [float(v) for v in value]
        if self.behavior is Behavior.DIVERGENT_COMPONENT:
            d["to_infinity"] = list(self.to_infinity)
            d["to_zero"] = list(self.to_zero)
        return d


def _divergence(tail: np.ndarray):
    last = tail[-1]
    d = np.diff(tail, axis=0)
    up = (last > DIVERGENCE_HIGH) & np.all(d > 0, axis=0)
    down = (last < DIVERGENCE_LOW) & np.all(d < 0, axis=0)
    return (tuple(int(i) + 1 for i in np.flatnonzero(up)),
            tuple(int(i) + 1 for i in np.flatnonzero(down)))


def detect_limit(orbit: Orbit, tol: float = DEFAULT_TOL,
                 window: int = DEFAULT_WINDOW) -> LimitReport:
    """Classify the tail of ``orbit``.

    Needs at least ``2 * window`` states, except that an orbit cut short by a
    breakdown is still checked for divergence once it has ``window + 1``
    states.
    """
    states = orbit.states
    n = len(states)
    steps_used = n - 1
    if n < 2 * window:
        if orbit.breakdown is None or n < window + 1:
            raise InsufficientData(f"need at least {2 * window} states, orbit has {n}")
        up, down = _divergence(states[-(window + 1):])
        if up or down:
            return LimitReport(Behavior.DIVERGENT_COMPONENT, steps_used, tol,
                               to_infinity=up, to_zero=down)
        return LimitReport(Behavior.UNDECIDED, steps_used, tol)

    up, down = _divergence(states[-(window + 1):])
    if up or down:
        return LimitReport(Behavior.DIVERGENT_COMPONENT, steps_used, tol,
                           to_infinity=up, to_zero=down)

    tail = states[-(window + 1):]
    if relative_change(tail[1:], tail[:-1]).max() < tol:
        return LimitReport(Behavior.CONVERGED_POINT, steps_used, tol, limit=states[-1].copy())

    if n >= 2 * window + 2:
        tail = states[-(2 * window + 2):]
        if relative_change(tail[2:], tail[:-2]).max() < tol:
            last, prev = states[-1].copy(), states[-2].copy()
            if relative_change(last, prev).max() <= tol:
                return LimitReport(Behavior.CONVERGED_POINT, steps_used, tol, limit=last)
            even, odd = (last, prev) if steps_used % 2 == 0 else (prev, last)
            return LimitReport(Behavior.CONVERGED_PERIOD2, steps_used, tol, even=even, odd=odd)

    return LimitReport(Behavior.UNDECIDED, steps_used, tol)


@dataclass(frozen=True)
class ConjugacyReport:
    max_deviation: float
    passed: bool
    steps_compared: int
    tolerance: float
    breakdown: Optional[Breakdown] = None
    worst_step: int = 0

    def to_dict(self) -> dict:
        d = {"max_deviation": self.max_deviation, "passed": self.passed,
             "steps_compared": self.steps_compared, "tolerance": self.tolerance,
             "worst_step": self.worst_step}
        if self.breakdown is not None:
            d["breakdown"] = {"step": self.breakdown.step, "cause": self.breakdown.cause.value}
        return d


def check_conjugacy(spec: SystemSpec, x0, pivot: int = None, n_steps: int = 200,
                    tol: float = 1e-9, reduced: Optional[ReducedSystem] = None) -> ConjugacyReport:
    """Iterate ``spec`` and its reduction side by side and compare.

    The deviation at time ``n`` is the largest relative difference between
    ``project(x_n, pivot)`` and the reduced orbit's ``u_n``. Only steps
    before the first breakdown of either orbit are compared. ``reduced``
    overrides the reduction under test.
    """
    if not classify(spec).is_projective:
        raise NotProjective("conjugacy needs a projective system")
    pivot = spec.k if pivot is None else pivot
    red = reduce(spec, pivot) if reduced is None else reduced
    full = iterate(spec, x0, n_steps)
    ratios = iterate(red, project(x0, pivot), n_steps)
    m = min(len(full), len(ratios))
    states = full.states[:m]
    projected = np.delete(states, pivot - 1, axis=1) / states[:, pivot - 1:pivot]
    dev = relative_change(projected, ratios.states[:m]).max(axis=1)
    worst = int(np.argmax(dev))
    breakdowns = [b for b in (full.breakdown, ratios.breakdown) if b is not None]
    breakdown = min(breakdowns, key=lambda b: b.step) if breakdowns else None
    max_dev = float(dev[worst])
    return ConjugacyReport(max_dev, max_dev < tol, m - 1, tol, breakdown, worst)


def orbit_csv(orbit: Orbit, names: Optional[Sequence[str]] = None) -> str:
    """Render ``orbit`` as CSV with 17 significant digits per value."""
    names = list(names) if names is not None else [f"x{i}" for i in range(1, orbit.dim + 1)]
    buf = io.StringIO()
    buf.write(",".join(["n"] + names) + "\n")
    for n, row in enumerate(orbit.states):
        buf.write(",".join([str(n)] + [format(float(v), ".17g") for v in row]) + "\n")
    if orbit.breakdown is not None:
        buf.write(f"# breakdown at n={orbit.breakdown.step}, cause={orbit.breakdown.cause.value}\n")
    return buf.getvalue()


def read_orbit_csv(text: str):
    """Parse :func:`orbit_csv` output into ``(names, states, breakdown)``."""
    lines = text.splitlines()
    names = lines[0].split(",")[1:]
    rows, breakdown = [], None
    for line in lines[1:]:
        if line.startswith("# breakdown"):
            step_part, cause_part = line[len("# breakdown at n="):].split(", cause=")
            breakdown = Breakdown(int(step_part), BreakdownCause(cause_part.strip()))
        elif line:
            rows.append([float(v) for v in line.split(",")[1:]])
    return names, np.array(rows).reshape(len(rows), len(names)), breakdown
