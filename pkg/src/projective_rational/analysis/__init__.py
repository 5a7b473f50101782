"""Closed-form analysis of three concrete projective systems."""

from .example2 import (Example2Limits, Example2Params, example2_limits,
                       example2_limits_literal, example2_reduced_step,
                       example2_second_order, example2_system)
from .example3 import (UNBOUNDED, Basin, Example3Analysis, Example3Case,
                       Example3Params, critical_point, cubic_coefficients,
                       example3_analyze, example3_basin, example3_limits,
                       example3_ratio, example3_reduced_map, example3_state_at_w1,
                       example3_sweep, example3_system, poly_eval,
                       positive_roots)
from .example4 import (Example4Limits, Example4Params, example4_limits,
                       example4_system, example4_two_step)

__all__ = [
    "Basin", "Example2Limits", "Example2Params", "Example3Analysis", "Example3Case",
    "Example3Params", "Example4Limits", "Example4Params", "UNBOUNDED",
    "critical_point", "cubic_coefficients", "example2_limits", "example2_limits_literal",
    "example2_reduced_step", "example2_second_order", "example2_system",
    "example3_analyze", "example3_basin", "example3_limits", "example3_ratio",
    "example3_reduced_map", "example3_state_at_w1", "example3_sweep", "example3_system",
    "example4_limits", "example4_system", "example4_two_step", "poly_eval",
    "positive_roots",
]
