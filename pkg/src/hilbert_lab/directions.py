"""Deterministic direction sets on the unit sphere.

Two families are provided.  `sphere_grid` gives well-spread fixed-size sets
(uniform angles in the plane, a Fibonacci lattice on S^2).  `sphere_nested`
gives low-discrepancy sequences whose first k elements are the same for every
k, so that enlarging a direction budget only ever adds directions.  Samplers
that promise monotone behaviour in the budget (e.g. dual norms, sandwich
probes) must use the nested family.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri
from scipy.stats.qmc import Halton

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


def circle_angles(k):
    """k uniformly spaced angles starting at 0."""
    return np.arange(k) * (2.0 * np.pi / k)


def circle_grid(k):
    th = circle_angles(k)
    return np.column_stack([np.cos(th), np.sin(th)])


def fibonacci_sphere(k):
    """Fibonacci lattice on S^2, a near-uniform fixed-size grid."""
    i = np.arange(k) + 0.5
    z = 1.0 - 2.0 * i / k
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    th = GOLDEN_ANGLE * np.arange(k)
    return np.column_stack([r * np.cos(th), r * np.sin(th), z])


def sphere_grid(dim, k):
    """Fixed-size well-spread directions; prefer for one-shot quadratures."""
    if dim == 1:
        out = np.ones((k, 1))
        out[1::2, 0] = -1.0
        return out
    if dim == 2:
        return circle_grid(k)
    if dim == 3:
        return fibonacci_sphere(k)
    return sphere_nested(dim, k)


def sphere_nested(dim, k):
    """First k elements of a nested low-discrepancy sequence on S^{dim-1}.

    dim 2 uses the golden-angle rotation, dim 3 a Halton sequence pushed
    through the area-preserving cylinder map, higher dimensions inverse-CDF
    Gaussians from a Halton sequence, normalised.
    """
    if dim == 1:
        out = np.ones((k, 1))
        out[1::2, 0] = -1.0
        return out
    if dim == 2:
        th = GOLDEN_ANGLE * np.arange(k)
        return np.column_stack([np.cos(th), np.sin(th)])
    if dim == 3:
        u = Halton(d=2, scramble=False).random(k + 1)[1:]  # drop the origin point
        z = 1.0 - 2.0 * u[:, 0]
        r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        th = 2.0 * np.pi * u[:, 1]
        return np.column_stack([r * np.cos(th), r * np.sin(th), z])
    u = Halton(d=dim, scramble=False).random(k + 1)[1:]
    g = ndtri(np.clip(u, 1e-12, 1.0 - 1e-12))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g
