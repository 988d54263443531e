"""Metric balls and uniform local-geometry constants.

Every Hilbert geometry looks the same at unit scale: normalise the
maximum-volume ellipsoid of the metric unit ball B(p, 1) to the Euclidean
unit ball, and dimension-only constants control the geometry.  This module
measures, in that normalised frame,

* step 1: the Euclidean gap between the boundary of B(p, 1) and the
  boundary of the body, bounded below by 1/(2 e^4 + 1);
* step 2: the shorter Euclidean half-chord min(a, b) through sampled points
  of B(p, 1), bounded by 3 sqrt(n) at the centre and by
  5 sqrt(n) + 3 (2 e^4 + 1) n everywhere;
* step 3: the ratio of the Finsler norm to the Euclidean norm, pinched
  between 1/(2 (5 sqrt(n) + 3 (2 e^4 + 1) n)) and 2 e^4 + 1.

The bounds are theorems; the suite checks the measured extremes against
them with tiny numerical slack and reports witnesses.  Metric balls are
exact along each sampled ray: the radial map inverting the along-chord
distance has a closed form, so no bisection is involved.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .bodies import NotInteriorError
from .directions import sphere_grid, sphere_nested
from .john import _ellipsoid_from_factor, _solve_inscribed
from .metric import hilbert_distance_pairs, ray_point_param

E4 = math.exp(4.0)
STEP1_GAP_LOWER = 1.0 / (2.0 * E4 + 1.0)
LIP_UPPER_BOUND = 2.0 * E4 + 1.0


def center_chord_bound(n):
    return 3.0 * math.sqrt(n)

def chord_bound(n):
    return 5.0 * math.sqrt(n) + 3.0 * (2.0 * E4 + 1.0) * n

def lip_lower_bound(n):
    return 1.0 / (2.0 * chord_bound(n))


def _default_resolution(dim):
    return 512 if dim == 2 else 2048


def _default_interior(dim):
    return 256 if dim == 2 else 1024


@dataclasses.dataclass(frozen=True)
class RadialBall:
    """Metric ball of given Hilbert radius, sampled radially from its centre."""

    center: np.ndarray
    radius: float
    directions: np.ndarray
    t_minus: np.ndarray
    t_plus: np.ndarray
    t_ball: np.ndarray

    @property
    def boundary_points(self):
        return self.center + self.t_ball[:, None] * self.directions

    @property
    def resolution(self):
        return len(self.directions)


def metric_ball(body, p, radius, resolution=None):
    """Boundary of {x : d(p, x) < radius}, exact along each sampled ray."""
    p = np.asarray(p, dtype=float)
    if not radius > 0.0:
        raise ValueError("radius: must be positive")
    if not body.contains(p):
        raise NotInteriorError("p: centre is not interior to the body")
    n = body.dim
    if resolution is None:
        resolution = _default_resolution(n)
    minimum = 16 if n == 2 else 128
    if resolution < minimum:
        raise ValueError(f"resolution: need at least {minimum} directions in dimension {n}")
    dirs = sphere_grid(n, resolution)
    tm, tp = body.chord_batch(np.tile(p, (resolution, 1)), dirs)
    t_ball = ray_point_param(tm, tp, radius)
    return RadialBall(p, float(radius), dirs, tm, tp, t_ball)


@dataclasses.dataclass(frozen=True)
class NormalizedFrame:
    """Affine frame in which the ellipsoid of B(p, 1) is the unit ball."""

    body: object
    center: np.ndarray
    ball_points: np.ndarray
    map: np.ndarray
    offset: np.ndarray


def john_normalize_ball(body, ball=None, p=None, hull_resolution=384):
    """Map the body so the metric unit ball's ellipsoid becomes the unit ball.

    The ellipsoid is solved on the convex hull of sampled ball-boundary
    points (an inscribed polytope, so the result sits inside the true ball).
    Returns the mapped body, the mapped centre and boundary sample, and the
    affine map x -> map @ x + offset realising the frame.
    """
    from scipy.spatial import ConvexHull

    if ball is None:
        if p is None:
            raise ValueError("p: need a centre when no ball is given")
        ball = metric_ball(body, p, 1.0)
    n = body.dim
    pts = ball.boundary_points
    if len(pts) > 2 * hull_resolution and n == 3:
        # a coarser independent sample keeps the hull and solve small
        sub = metric_ball(body, ball.center, ball.radius, hull_resolution)
        hull_pts = sub.boundary_points
    else:
        hull_pts = pts
    hull = ConvexHull(hull_pts)
    A = hull.equations[:, :n]
    b = -hull.equations[:, n]
    c, B = _solve_inscribed(A, b)
    ell = _ellipsoid_from_factor(c, B)
    w, Q = np.linalg.eigh(ell.shape)
    W = Q @ np.diag(np.sqrt(w)) @ Q.T  # maps the ellipsoid to the unit ball
    offset = -W @ ell.center
    from .bodies import affine_image

    mapped = affine_image(body, W, offset)
    return NormalizedFrame(
        body=mapped,
        center=W @ ball.center + offset,
        ball_points=pts @ W.T + offset,
        map=W,
        offset=offset,
    )


def _interior_samples(frame, ball, count):
    """Deterministic points inside the mapped unit metric ball: nested sphere
    directions paired with a stratified ladder of Hilbert radii."""
    body = frame.body
    c = frame.center
    n = body.dim
    dirs = sphere_nested(n, count)
    rhos = ball.radius * ((np.arange(count) + 0.5) / count) ** (1.0 / n)
    tm, tp = body.chord_batch(np.tile(c, (count, 1)), dirs)
    t = ray_point_param(tm, tp, rhos)
    return c + t[:, None] * dirs


@dataclasses.dataclass(frozen=True)
class Theorem12Report:
    """Measured local-geometry extremes against the dimension-only bounds."""

    dim: int
    point: np.ndarray
    d0: float
    d0_bound: float
    d0_witness: np.ndarray
    center_chord_max: float
    center_chord_bound: float
    chord_max: float
    chord_bound: float
    chord_witness: np.ndarray
    lip_upper: float
    lip_upper_bound: float
    lip_lower: float
    lip_lower_bound: float
    equivalence_constant: float
    diameter_max: float
    diameter_ok: bool
    passed: bool

    def bounds(self):
        return {
            "d0_lower": self.d0_bound,
            "center_chord_upper": self.center_chord_bound,
            "chord_upper": self.chord_bound,
            "lip_upper": self.lip_upper_bound,
            "lip_lower": self.lip_lower_bound,
        }


def theorem12_report(body, p, resolution=None, interior=None, dirs_per_point=64, slack=1e-9):
    """Run the three-step verification at one base point.

    Measures d0, the half-chord extremes and the bi-Lipschitz ratios in the
    normalised frame of B(p, 1), and compares them to the stated bounds with
    `slack`.  All sampling is deterministic.
    """
    p = np.asarray(p, dtype=float)
    n = body.dim
    if resolution is None:
        resolution = _default_resolution(n)
    if interior is None:
        interior = _default_interior(n)

    ball = metric_ball(body, p, 1.0, resolution)
    frame = john_normalize_ball(body, ball)
    nbody = frame.body
    c = frame.center
    bpts = frame.ball_points

    # step 1: gap between the ball boundary and the body boundary
    k2 = dirs_per_point
    dirs = sphere_nested(n, k2)
    m = len(bpts)
    tm, tp = nbody.chord_batch(np.repeat(bpts, k2, axis=0), np.tile(dirs, (m, 1)))
    exit_dist = np.minimum(tp, -tm).reshape(m, k2).min(axis=1)
    i0 = int(np.argmin(exit_dist))
    d0 = float(exit_dist[i0])

    # step 2: shorter Euclidean half-chord, at the centre and everywhere
    tm_c, tp_c = nbody.chord_batch(np.tile(c, (k2, 1)), dirs)
    center_max = float(np.minimum(tp_c, -tm_c).max())
    inner = _interior_samples(frame, ball, interior)
    mi = len(inner)
    tm_i, tp_i = nbody.chord_batch(np.repeat(inner, k2, axis=0), np.tile(dirs, (mi, 1)))
    half = np.minimum(tp_i, -tm_i).reshape(mi, k2)
    chord_max = float(half.max())
    iw = int(np.argmax(half.max(axis=1)))

    # step 3: Finsler norm against the Euclidean norm on unit directions
    F = (0.5 * (1.0 / tp_i - 1.0 / tm_i)).reshape(mi, k2)
    lip_hi = float(F.max())
    lip_lo = float(F.min())

    # ball diameter probe: opposite boundary points are at most 2 apart
    half_m = len(bpts) // 2
    P1 = bpts[:half_m]
    P2 = bpts[half_m : 2 * half_m]
    diam = float(hilbert_distance_pairs(nbody, P1, P2).max())

    cb = center_chord_bound(n)
    qb = chord_bound(n)
    report = Theorem12Report(
        dim=n,
        point=p,
        d0=d0,
        d0_bound=STEP1_GAP_LOWER,
        d0_witness=bpts[i0],
        center_chord_max=center_max,
        center_chord_bound=cb,
        chord_max=chord_max,
        chord_bound=qb,
        chord_witness=inner[iw],
        lip_upper=lip_hi,
        lip_upper_bound=LIP_UPPER_BOUND,
        lip_lower=lip_lo,
        lip_lower_bound=lip_lower_bound(n),
        equivalence_constant=max(lip_hi, 1.0 / lip_lo),
        diameter_max=diam,
        diameter_ok=bool(diam <= 2.0 * ball.radius + 1e-9),
        passed=bool(
            d0 >= STEP1_GAP_LOWER - slack
            and center_max <= cb + slack
            and chord_max <= qb + slack
            and lip_hi <= LIP_UPPER_BOUND + slack
            and lip_lo >= lip_lower_bound(n) - slack
            and diam <= 2.0 * ball.radius + 1e-9
        ),
    )
    return report


def theorem12_points(body, count=5):
    """Deterministic interior base points: the reference point plus points at
    Hilbert distances 0.8 and 1.6 in fixed directions."""
    p0 = body.interior_point()
    n = body.dim
    pts = [p0]
    dirs = sphere_nested(n, max(2, (count - 1 + 1) // 2))
    rhos = [0.8, 1.6]
    k = 0
    while len(pts) < count:
        v = dirs[k % len(dirs)]
        rho = rhos[(k // len(dirs)) % len(rhos)]
        ch = body.chord(p0, v)
        t = ray_point_param(ch.t_minus, ch.t_plus, rho)
        pts.append(p0 + t * v)
        k += 1
    return pts


def theorem12_suite(bodies=None, points_per_body=5, **kwargs):
    """Reports for every (body, base point) pair of the regression suite."""
    from .gallery import regression_suite

    if bodies is None:
        bodies = regression_suite()
    out = {}
    for label, body in bodies.items():
        reports = [
            theorem12_report(body, p, **kwargs)
            for p in theorem12_points(body, points_per_body)
        ]
        out[label] = reports
    return out
