"""First-order linear-fractional systems: representation, validation,
classification into the three projective classes, and the one-step map.

A system of dimension ``k`` updates every component as::

    x'[l] = (alpha[l] + beta[l] @ x) / (A[l] + B[l] @ x)

Coefficients and states are nonnegative reals stored as read-only float64
arrays.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidSystem, OrbitBreakdown

#: Denominators below this value count as vanished.
BREAKDOWN_THRESHOLD = 1e-300


class BreakdownCause(Enum):
    DENOMINATOR_UNDERFLOW = "DenominatorUnderflow"
    OVERFLOW = "Overflow"
    STATE_UNDERFLOW = "StateUnderflow"


class ProjectivityClass(Enum):
    HOMOGENEOUS = "Homogeneous"
    LINEAR_TYPE = "LinearType"
    HYPERBOLIC_TYPE = "HyperbolicType"
    NON_PROJECTIVE = "NonProjective"

    @property
    def is_projective(self) -> bool:
        return self is not ProjectivityClass.NON_PROJECTIVE


def _frozen(values, ndim: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SystemSpec:
    """Coefficients ``(alpha, beta, A, B)`` of a k-dimensional system.

    Shapes are checked on construction; the value-level invariants
    (nonnegativity, nonvanishing rows) are checked by :func:`validate`.
    """

    alpha: np.ndarray
    beta: np.ndarray
    A: np.ndarray
    B: np.ndarray
    labels: Optional[tuple] = field(default=None)

    def __post_init__(self):
        alpha = _frozen(self.alpha, 1, "alpha")
        k = alpha.shape[0]
        A = _frozen(self.A, 1, "A")
        beta = _frozen(self.beta, 2, "beta")
        B = _frozen(self.B, 2, "B")
        if A.shape != (k,):
            raise ValueError(f"A must have length {k}, got shape {A.shape}")
        if beta.shape != (k, k):
            raise ValueError(f"beta must be {k}x{k}, got shape {beta.shape}")
        if B.shape != (k, k):
            raise ValueError(f"B must be {k}x{k}, got shape {B.shape}")
        labels = None if self.labels is None else tuple(str(s) for s in self.labels)
        if labels is not None and len(labels) != k:
            raise ValueError(f"labels must have length {k}")
        for name, value in (("alpha", alpha), ("beta", beta), ("A", A), ("B", B),
                            ("labels", labels)):
            object.__setattr__(self, name, value)

    @property
    def k(self) -> int:
        return self.alpha.shape[0]

    def __eq__(self, other):
        if not isinstance(other, SystemSpec):
            return NotImplemented
        return (self.labels == other.labels
                and all(np.array_equal(a, b) for a, b in zip(
                    (self.alpha, self.beta, self.A, self.B),
                    (other.alpha, other.beta, other.A, other.B))))

    __hash__ = None

    def apply(self, x: np.ndarray) -> np.ndarray:
        return step(self, x)


@dataclass(frozen=True)
class ValidationIssue:
    check: str
    indices: tuple
    message: str


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple = ()

    @property
    def passed(self) -> bool:
        return not self.issues

    def __bool__(self):
        return self.passed


def validate(spec: SystemSpec) -> ValidationReport:
    """Check every value-level invariant of ``spec`` and report all failures."""
    issues = []
    if spec.k < 1:
        issues.append(ValidationIssue("dimension", (), "k must be at least 1"))
        return ValidationReport(tuple(issues))

    for name in ("alpha", "beta", "A", "B"):
        arr = getattr(spec, name)
        bad = np.argwhere(~np.isfinite(arr))
        if bad.size:
            idx = tuple(tuple(int(i) + 1 for i in row) for row in bad)
            issues.append(ValidationIssue("nonfinite", idx, f"{name} has non-finite entries at {idx}"))
        bad = np.argwhere(arr < 0)
        if bad.size:
            idx = tuple(tuple(int(i) + 1 for i in row) for row in bad)
            issues.append(ValidationIssue("negative", idx, f"{name} has negative entries at {idx}"))

    num_rows = tuple(int(l) + 1 for l in np.flatnonzero(spec.alpha + spec.beta.sum(axis=1) <= 0))
    if num_rows:
        issues.append(ValidationIssue(
            "zero_numerator", num_rows,
            f"numerator identically zero in rows {num_rows}"))
    den_rows = tuple(int(l) + 1 for l in np.flatnonzero(spec.A + spec.B.sum(axis=1) <= 0))
    if den_rows:
        issues.append(ValidationIssue(
            "zero_denominator", den_rows,
            f"denominator identically zero in rows {den_rows}"))
    return ValidationReport(tuple(issues))


def _rows_identical(M: np.ndarray) -> bool:
    return bool(np.all(M == M[0]))


def is_homogeneous(spec: SystemSpec) -> bool:
    return not spec.alpha.any() and not spec.A.any()


def is_linear_type(spec: SystemSpec) -> bool:
    """Zero numerator constants and one denominator shared by every equation."""
    return not spec.alpha.any() and bool(np.all(spec.A == spec.A[0])) and _rows_identical(spec.B)


def is_hyperbolic_type(spec: SystemSpec) -> bool:
    """Zero denominator constants and one numerator shared by every equation."""
    return (not spec.A.any() and bool(np.all(spec.alpha == spec.alpha[0]))
            and _rows_identical(spec.beta))


def classify(spec: SystemSpec) -> ProjectivityClass:
    """Return the projective class of ``spec``.

    Overlapping patterns resolve as Homogeneous > LinearType > HyperbolicType.
    Coefficients are compared exactly. ``NON_PROJECTIVE`` only means that
    none of the three coefficient patterns matches.
    """
    report = validate(spec)
    if not report:
        raise InvalidSystem(report)
    if is_homogeneous(spec):
        return ProjectivityClass.HOMOGENEOUS
    if is_linear_type(spec):
        return ProjectivityClass.LINEAR_TYPE
    if is_hyperbolic_type(spec):
        return ProjectivityClass.HYPERBOLIC_TYPE
    return ProjectivityClass.NON_PROJECTIVE


def checked_ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    """Componentwise ``num / den`` with the breakdown guards used by every map."""
    if np.minimum.reduce(den) < BREAKDOWN_THRESHOLD:
        raise OrbitBreakdown(BreakdownCause.DENOMINATOR_UNDERFLOW)
    out = num / den
    # NaN fails both comparisons and is reported as overflow
    if not np.maximum.reduce(out) < np.inf:
        raise OrbitBreakdown(BreakdownCause.OVERFLOW)
    if not np.minimum.reduce(out) > 0.0:
        raise OrbitBreakdown(BreakdownCause.STATE_UNDERFLOW)
    return out


def step(spec: SystemSpec, x: Sequence[float]) -> np.ndarray:
    """Apply the system map once to a positive state ``x``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.k,):
        raise ValueError(f"state must have length {spec.k}, got shape {x.shape}")
    return checked_ratio(spec.alpha + spec.beta @ x, spec.A + spec.B @ x)


def line_image_parallel(spec: SystemSpec, x: Sequence[float], lam: float,
                        tol: float = 1e-9) -> bool:
    """True iff ``step(lam * x)`` is parallel to ``step(x)``.

    Parallel means every componentwise ratio ``step(lam*x)[i] / step(x)[i]``
    agrees with every other to relative tolerance ``tol``.
    """
    x = np.asarray(x, dtype=float)
    ratio = step(spec, lam * x) / step(spec, x)
    return bool(ratio.max() / ratio.min() - 1.0 <= tol)
