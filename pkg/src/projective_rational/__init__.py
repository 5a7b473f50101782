"""Projective systems of rational difference equations.

Classify first-order linear-fractional systems, reduce projective ones by a
change of variables, iterate orbits and detect their limits.
"""

from .core import (BreakdownCause, ProjectivityClass, SystemSpec, ValidationReport,
                   classify, line_image_parallel, step, validate)
from .dynamics import (Behavior, ConvergencePolicy, LimitReport, Orbit, check_conjugacy,
                       detect_limit, iterate)
from .errors import (DegenerateRiccati, DimensionTooSmall, InsufficientData, InvalidSystem,
                     NotClassifiable, NotProjective, OrbitBreakdown, ProjectiveSystemError)
from .reduce import (AffineForm, ReducedKind, ReducedSystem, RiccatiLift, eval_reduced,
                     lift_riccati, project, reduce)

__version__ = "0.1.0"

__all__ = [
    "AffineForm", "Behavior", "BreakdownCause", "ConvergencePolicy", "DegenerateRiccati",
    "DimensionTooSmall", "InsufficientData", "InvalidSystem", "LimitReport",
    "NotClassifiable", "NotProjective", "Orbit", "OrbitBreakdown", "ProjectiveSystemError",
    "ProjectivityClass", "ReducedKind", "ReducedSystem", "RiccatiLift", "SystemSpec",
    "ValidationReport", "check_conjugacy", "classify", "detect_limit", "eval_reduced",
    "iterate", "lift_riccati", "line_image_parallel", "project", "reduce", "step",
    "validate",
]
