"""Random specs with the structural zeros of each projective class."""

import numpy as np

from .core import ProjectivityClass, SystemSpec

PROJECTIVE_CLASSES = (ProjectivityClass.HOMOGENEOUS, ProjectivityClass.LINEAR_TYPE,
                      ProjectivityClass.HYPERBOLIC_TYPE)


def positive_uniform(rng: np.random.Generator, size=None, high: float = 10.0):
    """Uniform draws on ``(0, high]``."""
    return high * (1.0 - rng.random(size))


def random_spec(rng: np.random.Generator, cls: ProjectivityClass, k: int,
                high: float = 10.0) -> SystemSpec:
    """Draw a k-dimensional spec of class ``cls``; free entries are uniform on ``(0, high]``."""
    zeros = np.zeros(k)
    if cls is ProjectivityClass.HOMOGENEOUS:
        return SystemSpec(zeros, positive_uniform(rng, (k, k), high), zeros,
                          positive_uniform(rng, (k, k), high))
    if cls is ProjectivityClass.LINEAR_TYPE:
        A = np.full(k, positive_uniform(rng, None, high))
        B = np.tile(positive_uniform(rng, k, high), (k, 1))
        return SystemSpec(zeros, positive_uniform(rng, (k, k), high), A, B)
    if cls is ProjectivityClass.HYPERBOLIC_TYPE:
        alpha = np.full(k, positive_uniform(rng, None, high))
        beta = np.tile(positive_uniform(rng, k, high), (k, 1))
        return SystemSpec(alpha, beta, zeros, positive_uniform(rng, (k, k), high))
    return SystemSpec(positive_uniform(rng, k, high), positive_uniform(rng, (k, k), high),
                      positive_uniform(rng, k, high), positive_uniform(rng, (k, k), high))
