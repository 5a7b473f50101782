"""Three-dimensional homogeneous-type system reduced to a monotone scalar map.

    x' = (x + y) / (A1 z + x + y)
    y' = (x + y) / (A2 z + x + y)
    z' = (alpha z + x + y) / (x + y)

The sum of ratios ``w = (x + y) / z`` evolves by the increasing map

    f(w) = w**2 / (alpha + w) * (1/(A1 + w) + 1/(A2 + w))

whose positive fixed points are the positive roots of the cubic

    P(w) = -w**3 + c2 w**2 + c1 w + c0
    c2 = 2 - A1 - A2 - alpha
    c1 = A1 + A2 - alpha A1 - alpha A2 - A1 A2
    c0 = -alpha A1 A2

P has either zero or two positive roots. Which one holds is decided by the
sign of ``c1`` and by ``P`` at its positive local maximum ``w_m``.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Optional, Sequence

import numpy as np

from ..core import SystemSpec
from ..errors import NotClassifiable

DEGENERATE_BAND = 1e-12
ROOT_GRID_POINTS = 10_000


class Example3Case(Enum):
    EXTINCTION = "Extinction"
    BISTABLE = "Bistable"
    DEGENERATE_BOUNDARY = "DegenerateBoundary"


class Basin(Enum):
    TO_ZERO = "ToZero"
    AT_W1 = "AtW1"
    TO_W2 = "ToW2"


class _Unbounded:
    """Marker for a limit that is +infinity."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNBOUNDED"

    def __reduce__(self):
        return (_Unbounded, ())


UNBOUNDED = _Unbounded()


@dataclass(frozen=True)
class Example3Params:
    alpha: float
    A1: float
    A2: float

    def __post_init__(self):
        for name in ("alpha", "A1", "A2"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive, got {value}")
            object.__setattr__(self, name, float(value))


@dataclass(frozen=True)
class Example3Analysis:
    params: Example3Params
    P: tuple
    w_m: Optional[float]
    P_at_wm: Optional[float]
    case: Example3Case
    condition: str
    roots: Optional[tuple] = None

    @property
    def scale(self) -> float:
        return max(abs(c) for c in self.P)

    @property
    def w1(self) -> float:
        return self.roots[0]

    @property
    def w2(self) -> float:
        return self.roots[1]

    def to_dict(self) -> dict:
        return {
            "alpha": self.params.alpha, "A1": self.params.A1, "A2": self.params.A2,
            "case": self.case.value, "condition": self.condition,
            "P_coeffs": list(self.P), "w_m": self.w_m, "P_at_wm": self.P_at_wm,
            "roots": None if self.roots is None else list(self.roots),
        }


def example3_system(p: Example3Params) -> SystemSpec:
    return SystemSpec(
        alpha=[0.0, 0.0, 0.0],
        beta=[[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [1.0, 1.0, p.alpha]],
        A=[0.0, 0.0, 0.0],
        B=[[1.0, 1.0, p.A1], [1.0, 1.0, p.A2], [1.0, 1.0, 0.0]],
        labels=("x", "y", "z"),
    )


def cubic_coefficients(p: Example3Params) -> tuple:
    """``(c3, c2, c1, c0)`` of P, highest degree first."""
    a, A1, A2 = p.alpha, p.A1, p.A2
    return (-1.0, 2 - A1 - A2 - a, A1 + A2 - a * A1 - a * A2 - A1 * A2, -a * A1 * A2)


def poly_eval(coeffs: Sequence[float], w: float) -> float:
    acc = 0.0
    for c in coeffs:
        acc = acc * w + c
    return acc


def critical_point(p: Example3Params) -> Optional[float]:
    """Larger root of P' = -3 w**2 + 2 c2 w + c1, or None if P' has no real root."""
    _, c2, c1, _ = cubic_coefficients(p)
    radicand = 4 * c2 * c2 + 12 * c1
    if radicand < 0:
        return None
    return (2 * c2 + math.sqrt(radicand)) / 6


def bisect_root(fn, lo: float, hi: float) -> float:
    """Bisect a sign change of ``fn`` on ``[lo, hi]`` down to adjacent floats."""
    flo = fn(lo)
    if flo == 0:
        return lo
    if fn(hi) == 0:
        return hi
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fmid = fn(mid)
        if fmid == 0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def positive_root_bounds(coeffs: Sequence[float]) -> tuple:
    """Cauchy bounds ``(lower, upper)`` on the positive roots of a polynomial
    with nonzero leading and constant coefficients."""
    lead, const = coeffs[0], coeffs[-1]
    upper = 1 + max(abs(c) for c in coeffs[1:]) / abs(lead)
    lower = 1 / (1 + max(abs(c) for c in coeffs[:-1]) / abs(const))
    return lower, upper


def positive_roots(coeffs: Sequence[float], n_grid: int = ROOT_GRID_POINTS,
                   extra: Sequence[float] = ()) -> tuple:
    """Isolate positive roots by a sign scan over a log grid, then bisect.

    The grid spans the Cauchy bounds; ``extra`` points (such as a known
    local maximum) are merged into it.
    """
    lower, upper = positive_root_bounds(coeffs)
    grid = np.geomspace(lower * 0.5, upper + 1, n_grid)
    extra = [e for e in extra if e is not None and grid[0] < e < grid[-1]]
    if extra:
        grid = np.union1d(grid, extra)
    signs = np.sign(np.polyval(coeffs, grid))
    fn = lambda w: poly_eval(coeffs, w)  # noqa: E731
    roots = []
    for i in np.flatnonzero(signs[:-1] * signs[1:] <= 0):
        if signs[i] == 0:
            roots.append(float(grid[i]))
        elif signs[i + 1] != 0:
            roots.append(bisect_root(fn, float(grid[i]), float(grid[i + 1])))
    return tuple(roots)


def example3_analyze(p: Example3Params) -> Example3Analysis:
    coeffs = cubic_coefficients(p)
    _, c2, c1, _ = coeffs
    scale = max(abs(c) for c in coeffs)
    w_m = critical_point(p)
    P_at_wm = None if w_m is None else poly_eval(coeffs, w_m)

    def finish(case, condition):
        roots = None
        if case is Example3Case.BISTABLE:
            found = positive_roots(coeffs, extra=[w_m])
            if len(found) != 2:
                raise ArithmeticError(f"expected two positive roots of P, isolated {found}")
            roots = found
        return Example3Analysis(p, coeffs, w_m, P_at_wm, case, condition, roots)

    if c1 > 0:
        condition = "c1 > 0"
    elif c1 == 0:
        if p.A1 + p.A2 + p.alpha >= 2:
            return finish(Example3Case.EXTINCTION, "c1 = 0 and A1 + A2 + alpha >= 2")
        condition = "c1 = 0 and A1 + A2 + alpha < 2"
    else:
        if 2 * c2 <= math.sqrt(-12 * c1):
            return finish(Example3Case.EXTINCTION, "c1 < 0 and 2*c2 <= sqrt(-12*c1)")
        condition = "c1 < 0 and 2*c2 > sqrt(-12*c1)"

    if abs(P_at_wm) < DEGENERATE_BAND * scale:
        return finish(Example3Case.DEGENERATE_BOUNDARY, condition + " and P(w_m) = 0")
    if P_at_wm > 0:
        return finish(Example3Case.BISTABLE, condition + " and P(w_m) > 0")
    return finish(Example3Case.EXTINCTION, condition + " and P(w_m) < 0")


def example3_reduced_map(p: Example3Params, w: float) -> float:
    """The scalar map followed by ``w = (x + y) / z``."""
    return w * w / (p.alpha + w) * (1 / (p.A1 + w) + 1 / (p.A2 + w))


def example3_ratio(x0: Sequence[float]) -> float:
    x, y, z = x0
    return (x + y) / z


def example3_basin(analysis: Example3Analysis, w0: float) -> Basin:
    """Which equilibrium of the scalar map attracts ``w0``.

    Membership of the repelling equilibrium is exact equality with ``w1``;
    build such initial data with :func:`example3_state_at_w1`.
    """
    if w0 < 0:
        raise ValueError("w0 must be nonnegative")
    if analysis.case is Example3Case.DEGENERATE_BOUNDARY:
        raise NotClassifiable("P has a double positive root; basins are not resolved")
    if analysis.case is Example3Case.EXTINCTION:
        return Basin.TO_ZERO
    if w0 < analysis.w1:
        return Basin.TO_ZERO
    if w0 == analysis.w1:
        return Basin.AT_W1
    return Basin.TO_W2


def example3_state_at_w1(analysis: Example3Analysis, z0: float = 1.0) -> tuple:
    """An initial state whose ratio ``(x + y) / z`` equals ``w1`` exactly."""
    if analysis.case is not Example3Case.BISTABLE:
        raise NotClassifiable("w1 exists only in the bistable case")
    if z0 != 1.0:
        # keep (x + y) / z exact: only powers of two rescale without rounding
        mant, _ = math.frexp(z0)
        if mant != 0.5:
            raise ValueError("z0 must be a power of two")
    half = analysis.w1 * z0 / 2
    return (half, half, z0)


def _triple(p: Example3Params, w: float) -> tuple:
    return (w / (p.A1 + w), w / (p.A2 + w), 1 + p.alpha / w)


def example3_limits(analysis: Example3Analysis, w0: float) -> tuple:
    """Limit of ``(x_n, y_n, z_n)`` for initial ratio ``w0``.

    In the ``AT_W1`` basin the triple is attained exactly from ``n = 1``.
    """
    basin = example3_basin(analysis, w0)
    if basin is Basin.TO_ZERO:
        return (0.0, 0.0, UNBOUNDED)
    w = analysis.w1 if basin is Basin.AT_W1 else analysis.w2
    return _triple(analysis.params, w)


def _sweep_cell(cell):
    a, A1, A2 = cell
    res = example3_analyze(Example3Params(a, A1, A2))
    w1, w2 = res.roots if res.roots is not None else (None, None)
    return (a, A1, A2, res.case, w1, w2)


def example3_sweep(alphas: Sequence[float], A1s: Sequence[float], A2s: Sequence[float],
                   workers: int = 1) -> list:
    """Analyze every cell of the grid; rows come back in lexicographic
    ``(alpha, A1, A2)`` order whatever the worker count."""
    cells = list(product(alphas, A1s, A2s))
    if workers <= 1:
        return [_sweep_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_cell, cells, chunksize=max(1, len(cells) // (4 * workers))))
