"""Three-dimensional hyperbolic-type system with a closed-form limit.

    x' = x / (C y + A z),   y' = x / (D z),   z' = x / (beta x + alpha z)

With ``u = x/z`` and ``v = y/z`` the system reduces to
``u' = (beta u + alpha) / (C v + A)``, ``v' = (beta u + alpha) / D``. The
ratio ``u`` then obeys the second-order equation

    u[n+1] = (beta u[n] + alpha) / (beta C u[n-1] / D + A + alpha C / D)

whose positive equilibrium attracts every positive solution. All limits of
the original system follow from that equilibrium.
"""

from dataclasses import asdict, dataclass
from math import sqrt

from ..core import SystemSpec


@dataclass(frozen=True)
class Example2Params:
    C: float
    A: float
    D: float
    beta: float
    alpha: float

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value}")
            object.__setattr__(self, name, float(value))


@dataclass(frozen=True)
class Example2Limits:
    x: float
    y: float
    z: float
    u: float
    v: float


def example2_system(p: Example2Params) -> SystemSpec:
    return SystemSpec(
        alpha=[0.0, 0.0, 0.0],
        beta=[[1.0, 0.0, 0.0]] * 3,
        A=[0.0, 0.0, 0.0],
        B=[[0.0, p.C, p.A], [0.0, 0.0, p.D], [p.beta, 0.0, p.alpha]],
        labels=("x", "y", "z"),
    )


def plus_root(q: float, c: float) -> float:
    """``q + sqrt(q*q + c)`` for ``c > 0`` without cancellation when ``q < 0``."""
    root = sqrt(q * q + c)
    return q + root if q >= 0 else c / (root - q)


def _limits(p: Example2Params, q: float) -> Example2Limits:
    C, D, b, a = p.C, p.D, p.beta, p.alpha
    # s is q + root; the x numerator 2q^2 + 4aDbC + 2q*root equals s^2
    s = plus_root(q, 4 * a * D * b * C)
    u = s / (2 * b * C)
    v = (2 * a * C + s) / (2 * C * D)
    y = s / (2 * b * C * D)
    x = s * s / ((2 * b * C) * b * (2 * a * C + s))
    z = s / (b * (2 * a * C + s))
    return Example2Limits(x, y, z, u, v)


def example2_limits(p: Example2Params) -> Example2Limits:
    """Closed-form limits of ``(x, y, z)`` and of the ratios ``(u, v)``.

    ``u`` is the positive root of
    ``beta C u**2 + (alpha C + A D - beta D) u - alpha D = 0``; then
    ``v = (beta u + alpha) / D``, ``y = u / D``, ``z = y / v`` and
    ``x = u z``, each written out in radicals. The common term
    ``q + sqrt(q**2 + 4 alpha D beta C)`` is evaluated in a form that stays
    accurate when ``q`` is large and negative.
    """
    return _limits(p, p.beta * p.D - p.A * p.D - p.alpha * p.C)


def example2_limits_literal(p: Example2Params) -> Example2Limits:
    """The same radical expressions with ``alpha`` in place of ``alpha C``.

    This is what the closed forms become if the lagged denominator is taken
    as ``... + A + alpha / D``. It agrees with :func:`example2_limits` only
    when ``C == 1``; for any other ``C`` simulated orbits do not approach it.
    """
    C, A, D, b, a = p.C, p.A, p.D, p.beta, p.alpha
    q = b * D - A * D - a
    root = sqrt(q * q + 4 * a * D * b * C)
    u = (q + root) / (2 * b * C)
    v = (2 * a * C + q + root) / (2 * C * D)
    y = (q + root) / (2 * b * C * D)
    den = 2 * a * b * C + b * b * D - A * D * b - a * b + b * root
    x = (2 * q * q + 4 * a * D * b * C + 2 * q * root) / ((2 * b * C) * den)
    z = (q + root) / den
    return Example2Limits(x, y, z, u, v)


def example2_second_order(p: Example2Params, u_now: float, u_prev: float) -> float:
    """One step of the second-order recurrence satisfied by ``u = x / z``."""
    return (p.beta * u_now + p.alpha) / (
        p.beta * p.C * u_prev / p.D + p.A + p.alpha * p.C / p.D)


def example2_reduced_step(p: Example2Params, u: float, v: float):
    w = p.beta * u + p.alpha
    return w / (p.C * v + p.A), w / p.D
