"""Three-dimensional hyperbolic-type system with a period-2 limit.

    x' = 1 / (A z + B y),   y' = 1 / (C z + D x),   z' = 1 / z

The ratios ``u = x/z``, ``v = y/z`` follow ``u' = 1/(A + B v)``,
``v' = 1/(C + D u)``. Two steps of that map give a Riccati equation for the
even and for the odd subsequence of ``u``. Both converge to the same
positive equilibrium, while ``z`` alternates between ``z0`` and ``1/z0``.
"""

from dataclasses import asdict, dataclass

from ..core import SystemSpec
from .example2 import plus_root


@dataclass(frozen=True)
class Example4Params:
    A: float
    B: float
    C: float
    D: float
    z0: float = 1.0

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value}")
            object.__setattr__(self, name, float(value))


@dataclass(frozen=True)
class Example4Limits:
    x_even: float
    y_even: float
    z_even: float
    x_odd: float
    y_odd: float
    z_odd: float
    u: float
    v: float

    @property
    def even(self) -> tuple:
        return (self.x_even, self.y_even, self.z_even)

    @property
    def odd(self) -> tuple:
        return (self.x_odd, self.y_odd, self.z_odd)


def example4_system(p: Example4Params) -> SystemSpec:
    return SystemSpec(
        alpha=[1.0, 1.0, 1.0],
        beta=[[0.0, 0.0, 0.0]] * 3,
        A=[0.0, 0.0, 0.0],
        B=[[0.0, p.B, p.A], [p.D, 0.0, p.C], [0.0, 0.0, 1.0]],
        labels=("x", "y", "z"),
    )


def example4_limits(p: Example4Params) -> Example4Limits:
    """Even- and odd-time limits of ``(x, y, z)``.

    With ``q = D - A C - B`` the equilibrium of the ratio ``u`` is
    ``(q + sqrt(q**2 + 4 A D C)) / (2 A D)``; the sum is evaluated without
    cancellation when ``q < 0``.
    """
    A, B, C, D, z0 = p.A, p.B, p.C, p.D, p.z0
    s = plus_root(D - A * C - B, 4 * A * D * C)
    u = s / (2 * A * D)
    v = 2 * A / (2 * A * C + s)
    return Example4Limits(
        x_even=z0 * s / (2 * A * D),
        y_even=z0 * 2 * A / (2 * A * C + s),
        z_even=z0,
        x_odd=s / (2 * A * D * z0),
        y_odd=2 * A / (z0 * (2 * A * C + s)),
        z_odd=1 / z0,
        u=u,
        v=v,
    )


def example4_two_step(p: Example4Params, u: float) -> float:
    """``u[n+1]`` as a function of ``u[n-1]`` (the Riccati map)."""
    A, B, C, D = p.A, p.B, p.C, p.D
    return (C + D * u) / (A * C + A * D * u + B)
