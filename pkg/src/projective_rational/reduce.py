"""Dimension-reducing changes of variables for projective systems.

Dividing every component by a pivot component ``x[p]`` turns a projective
k-dimensional system into a (k-1)-dimensional map on the ratios
``u[i] = x[i] / x[p]``. The reduced map is stored as affine-form data, so it
can be printed, serialized and compared. Each reduced component has the
form ``(numA(u) * numB(u)) / (denA(u) * denB(u))``.

Pivots and component numbers are 1-based, so component ``i`` of the state
is ``x_i``.
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Sequence

import numpy as np

from .core import ProjectivityClass, SystemSpec, checked_ratio, classify
from .errors import DegenerateRiccati, DimensionTooSmall, NotProjective


class ReducedKind(Enum):
    HOMOGENEOUS = "HomogeneousReduced"
    LINEAR = "LinearReduced"
    HYPERBOLIC = "HyperbolicReduced"


_KIND_FOR_CLASS = {
    ProjectivityClass.HOMOGENEOUS: ReducedKind.HOMOGENEOUS,
    ProjectivityClass.LINEAR_TYPE: ReducedKind.LINEAR,
    ProjectivityClass.HYPERBOLIC_TYPE: ReducedKind.HYPERBOLIC,
}


@dataclass(frozen=True)
class AffineForm:
    """``c + coeffs @ u``."""

    c: float
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "coeffs", tuple(float(a) for a in self.coeffs))

    @classmethod
    def one(cls, m: int) -> "AffineForm":
        return cls(1.0, (0.0,) * m)

    def __call__(self, u) -> float:
        return self.c + float(np.dot(self.coeffs, u))

    def render(self, names: Sequence[str]) -> str:
        terms = [_num(self.c)] if self.c else []
        terms += [f"{_num(a)}*{n}" for a, n in zip(self.coeffs, names) if a]
        return "(" + (" + ".join(terms) or "0") + ")"


def _num(v: float) -> str:
    return f"{v:.12g}"


@dataclass(frozen=True)
class ReducedComponent:
    numA: AffineForm
    numB: AffineForm
    denA: AffineForm
    denB: AffineForm


@dataclass(frozen=True)
class ReducedSystem:
    kind: ReducedKind
    pivot: int
    k: int
    components: tuple

    @property
    def dim(self) -> int:
        return self.k - 1

    @property
    def others(self) -> tuple:
        """1-based indices of the original components kept as ratios."""
        return tuple(i for i in range(1, self.k + 1) if i != self.pivot)

    @property
    def variable_names(self) -> tuple:
        return tuple(f"u{i}" for i in self.others)

    @cached_property
    def _stacked(self):
        # rows: numA, numB, denA, denB forms of every component, in that order
        forms = [getattr(comp, slot) for slot in ("numA", "numB", "denA", "denB")
                 for comp in self.components]
        consts = np.array([f.c for f in forms])
        coeffs = np.array([f.coeffs for f in forms]).reshape(len(forms), self.dim)
        return consts, coeffs

    def apply(self, u: np.ndarray) -> np.ndarray:
        return eval_reduced(self, u)

    def render(self) -> str:
        names = self.variable_names
        lines = []
        for name, comp in zip(names, self.components):
            if self.kind is ReducedKind.HOMOGENEOUS:
                num = comp.numA.render(names) + comp.numB.render(names)
                den = comp.denA.render(names) + comp.denB.render(names)
            else:
                num, den = comp.numA.render(names), comp.denA.render(names)
            lines.append(f"{name}' = {num} / {den}")
        return "\n".join(lines)


def _form(row: np.ndarray, pivot0: int, others0: list) -> AffineForm:
    return AffineForm(row[pivot0], tuple(row[others0]))


def reduce(spec: SystemSpec, pivot: int = None) -> ReducedSystem:
    """Reduce a projective system by the ratios ``x_i / x_pivot``.

    ``pivot`` defaults to ``k``. Any pivot is handled by letting it play the
    role of the last coordinate.
    """
    k = spec.k
    if k < 2:
        raise DimensionTooSmall("dimension too small for reduction (k>1 required)")
    cls = classify(spec)
    if not cls.is_projective:
        raise NotProjective("system matches none of the projective coefficient patterns")
    pivot = k if pivot is None else int(pivot)
    if not 1 <= pivot <= k:
        raise ValueError(f"pivot must be in 1..{k}, got {pivot}")

    p = pivot - 1
    others = [i for i in range(k) if i != p]
    m = k - 1
    beta, B = spec.beta, spec.B
    components = []
    for j in others:
        if cls is ProjectivityClass.HOMOGENEOUS:
            comp = ReducedComponent(
                numA=_form(beta[j], p, others), numB=_form(B[p], p, others),
                denA=_form(beta[p], p, others), denB=_form(B[j], p, others))
        elif cls is ProjectivityClass.LINEAR_TYPE:
            comp = ReducedComponent(
                numA=_form(beta[j], p, others), numB=AffineForm.one(m),
                denA=_form(beta[p], p, others), denB=AffineForm.one(m))
        else:
            comp = ReducedComponent(
                numA=_form(B[p], p, others), numB=AffineForm.one(m),
                denA=_form(B[j], p, others), denB=AffineForm.one(m))
        components.append(comp)
    return ReducedSystem(_KIND_FOR_CLASS[cls], pivot, k, tuple(components))


def eval_reduced(red: ReducedSystem, u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (red.dim,):
        raise ValueError(f"reduced state must have length {red.dim}, got shape {u.shape}")
    consts, coeffs = red._stacked
    f = (consts + coeffs @ u).reshape(4, red.dim)
    return checked_ratio(f[0] * f[1], f[2] * f[3])


def project(x, pivot: int) -> np.ndarray:
    """Ratios ``x_i / x_pivot`` for ``i != pivot``, in ascending index order."""
    x = np.asarray(x, dtype=float)
    p = int(pivot) - 1
    if not 0 <= p < x.shape[0]:
        raise ValueError(f"pivot must be in 1..{x.shape[0]}, got {pivot}")
    return np.delete(x, p) / x[p]


@dataclass(frozen=True)
class RiccatiLift:
    """Linear planar system whose coordinate ratio tracks a Riccati orbit.

    For ``x' = (alpha + beta*x) / (A + B*x)`` the pair ``(y, z)`` evolves by
    ``y' = beta*y + alpha*z`` and ``z' = B*y + A*z``. Starting from
    ``(x0, 1)`` gives ``y_n / z_n = x_n`` for every ``n``.
    """

    matrix: tuple
    y0: float
    z0: float = 1.0

    def iterate(self, n_steps: int) -> np.ndarray:
        """Return the ``(n_steps + 1, 2)`` array of ``(y_n, z_n)``."""
        M = np.array(self.matrix)
        out = np.empty((n_steps + 1, 2))
        out[0] = self.y0, self.z0
        for n in range(n_steps):
            out[n + 1] = M @ out[n]
        return out

    def ratios(self, n_steps: int) -> np.ndarray:
        yz = self.iterate(n_steps)
        return yz[:, 0] / yz[:, 1]


def lift_riccati(alpha: float, beta: float, A: float, B: float, x0: float) -> RiccatiLift:
    if min(alpha, beta, A, B) < 0:
        raise DegenerateRiccati("Riccati parameters must be nonnegative")
    if (A + B) * (alpha + beta) == 0:
        raise DegenerateRiccati("need (A + B)(alpha + beta) != 0")
    if not x0 > 0:
        raise DegenerateRiccati("initial condition must be positive")
    return RiccatiLift(((float(beta), float(alpha)), (float(B), float(A))), float(x0), 1.0)
