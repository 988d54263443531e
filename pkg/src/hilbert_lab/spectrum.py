"""Rayleigh, Sobolev and Cheeger quotients against the Busemann measure.

Trial functions are radial profiles composed with the Hilbert distance from a
center point.  Their differentials come from the chain rule: the profile slope
times the finite-difference gradient of the distance, measured in the dual
Finsler norm.  All integrals run through the polar Monte Carlo proposal over
metric balls, so numerator and denominator of a quotient share the same
proposal points (common random numbers); the reported standard error treats
them as independent, which is conservative.

The cylinder section compares the three-dimensional volume of tangent unit
balls on a solid cylinder with the fibered surrogate alpha(t) times the disk
volume, checks the two closed-form facts that drive the comparison, and
exposes the spectral-gap constant the sandwich yields.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable

import numpy as np

from .gallery import cylinder, slab_product, unit_disk
from .measure import MetricBallRegion, integrate, tub_volume
from .metric import dual_norm_batch, finsler_norm_batch, hilbert_distance_pairs, hilbert_gradient

# Volume comparison constants for the solid cylinder: the tangent-ball volume
# at height t sits between C1 and C2 times alpha(t) = 1 - t^2 times the disk
# tangent-ball volume at the same base point.
SANDWICH_LOWER = 2.0 / 3.0
SANDWICH_UPPER = 8.0

# One-dimensional Poincare comparison through the sandwich gives a spectral
# gap of at least C1 / (4 C2) = 1/48 on the cylinder.
SPECTRAL_LOWER_BOUND = SANDWICH_LOWER / (4.0 * SANDWICH_UPPER)


def fiber_weight(t):
    """The weight alpha(t) = (1 - t)(1 + t) of the height-t disk fiber."""
    t = np.asarray(t, dtype=float)
    return (1.0 - t) * (1.0 + t)


@dataclasses.dataclass(frozen=True)
class TrialFunction:
    """Radial trial function phi(d(center, .)) supported in a metric ball.

    `profile` maps an array of Hilbert radii to values, `slope` to the radial
    derivative d phi / d rho.  Both must vanish for rho >= radius.
    """

    label: str
    center: np.ndarray
    radius: float
    profile: Callable
    slope: Callable

    def distances(self, body, X):
        X = np.asarray(X, dtype=float)
        C = np.tile(np.asarray(self.center, dtype=float), (len(X), 1))
        return hilbert_distance_pairs(body, C, X)

    def evaluate(self, body, X):
        return np.asarray(self.profile(self.distances(body, X)), dtype=float)

    def gradient(self, body, X, delta=1e-3):
        """Euclidean-coordinate differential rows slope(rho) * grad rho.

        Rows with zero slope are skipped; elsewhere the distance gradient is
        a finite difference with metric-scaled steps, so the probes stay
        interior arbitrarily close to the boundary.
        """
        X = np.asarray(X, dtype=float)
        s = np.asarray(self.slope(self.distances(body, X)), dtype=float)
        out = np.zeros_like(X)
        live = s != 0.0
        if np.any(live):
            g = hilbert_gradient(body, self.center, X[live], delta=delta)
            out[live] = s[live, None] * g
        return out


def radial_tent(center, radius, label=None):
    """Tent profile 1 - rho/R, the piecewise-linear cone over the ball."""
    R = float(radius)
    if R <= 0:
        raise ValueError("radius: need a positive support radius")

    def profile(rho):
        return np.maximum(0.0, 1.0 - rho / R)

    def slope(rho):
        return np.where(rho < R, -1.0 / R, 0.0)

    return TrialFunction(label or f"tent(R={R:g})", np.asarray(center, dtype=float), R, profile, slope)


def radial_exponential(center, radius, rate, label=None):
    """Exponential profile exp(-rate * rho), truncated hard at the radius.

    The truncation leaves a jump of size exp(-rate * R) on the support
    sphere.  The jump is not charged to the gradient: quotients integrate the
    absolutely continuous part only, so the quotient of this profile on a
    space with exponential volume growth settles at rate**2 for any radius.
    Rates below the critical decay of the volume growth make the uncharged
    jump dominant; the minimizer's default grid therefore starts at 1/2.
    """
    R = float(radius)
    s = float(rate)
    if R <= 0:
        raise ValueError("radius: need a positive support radius")
    if s <= 0:
        raise ValueError("rate: need a positive decay rate")

    def profile(rho):
        rho = np.asarray(rho, dtype=float)
        return np.where(rho < R, np.exp(-s * np.minimum(rho, R)), 0.0)

    def slope(rho):
        rho = np.asarray(rho, dtype=float)
        return np.where(rho < R, -s * np.exp(-s * np.minimum(rho, R)), 0.0)

    return TrialFunction(
        label or f"exp(rate={s:g}, R={R:g})", np.asarray(center, dtype=float), R, profile, slope
    )


@dataclasses.dataclass(frozen=True)
class QuotientEstimate:
    numerator: float
    numerator_stderr: float
    denominator: float
    denominator_stderr: float
    quotient: float
    stderr: float
    samples: int
    seed: int


def _quotient(num, den, samples, seed):
    if not den.value > 0:
        raise RuntimeError("denominator estimate is not positive; trial mass too small to resolve")
    q = num.value / den.value
    rel = math.hypot(num.stderr / num.value if num.value else 0.0, den.stderr / den.value)
    return QuotientEstimate(
        num.value, num.stderr, den.value, den.stderr, q, abs(q) * rel, samples, seed
    )


def rayleigh_quotient(
    body,
    trial,
    samples=2**15,
    seed=0,
    directions=32,
    delta=1e-3,
    resolution=None,
    density_samples=2048,
    strata=16,
    threads=None,
):
    """Dirichlet energy over mass of the trial against the Busemann measure.

    Numerator integrates the squared dual norm of the differential, the
    denominator the squared value, both over the trial's support ball with
    the same seed so the two share proposal points.
    """
    region = MetricBallRegion(np.asarray(trial.center, dtype=float), float(trial.radius))

    def energy(X):
        G = trial.gradient(body, X, delta=delta)
        return dual_norm_batch(body, X, G, directions=directions) ** 2

    def mass(X):
        return trial.evaluate(body, X) ** 2

    common = dict(
        weight="hilbert-density",
        samples=samples,
        seed=seed,
        region=region,
        resolution=resolution,
        density_samples=density_samples,
        strata=strata,
        threads=threads,
    )
    num = integrate(body, energy, **common)
    den = integrate(body, mass, **common)
    return _quotient(num, den, samples, seed)


def sobolev_quotient(
    body,
    trial,
    samples=2**15,
    seed=0,
    directions=32,
    delta=1e-3,
    resolution=None,
    density_samples=2048,
    strata=16,
    threads=None,
):
    """First-power quotient: integral of the dual gradient norm over the
    integral of |f|, the L1 counterpart of the Rayleigh quotient."""
    region = MetricBallRegion(np.asarray(trial.center, dtype=float), float(trial.radius))

    def energy(X):
        G = trial.gradient(body, X, delta=delta)
        return dual_norm_batch(body, X, G, directions=directions)

    def mass(X):
        return np.abs(trial.evaluate(body, X))

    common = dict(
        weight="hilbert-density",
        samples=samples,
        seed=seed,
        region=region,
        resolution=resolution,
        density_samples=density_samples,
        strata=strata,
        threads=threads,
    )
    num = integrate(body, energy, **common)
    den = integrate(body, mass, **common)
    return _quotient(num, den, samples, seed)


@dataclasses.dataclass(frozen=True)
class MinimizeResult:
    trial: TrialFunction
    estimate: QuotientEstimate
    history: tuple
    evaluations: int


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def minimize_rayleigh(
    body,
    center,
    radius,
    family="exponential",
    rates=None,
    budget=12,
    samples=2**14,
    seed=0,
    **kwargs,
):
    """Minimize the Rayleigh quotient over a one-parameter trial family.

    family "tent" has no free parameter beyond the fixed support radius and
    spends a single evaluation.  family "exponential" scans the decay-rate
    grid (default 0.5 .. 1.5) and spends any remaining budget on golden
    section refinement around the best grid point, all with the same seed so
    the history is comparable.  Raises if the budget is exhausted without a
    finite quotient.
    """
    if budget < 1:
        raise ValueError("budget: need at least one evaluation")
    history = []

    def run(trial):
        est = rayleigh_quotient(body, trial, samples=samples, seed=seed, **kwargs)
        history.append((trial, est))
        return est

    if family == "tent":
        trial = radial_tent(center, radius)
        est = run(trial)
        if not math.isfinite(est.quotient):
            raise RuntimeError("budget exhausted without a finite quotient")
        return MinimizeResult(trial, est, tuple(history), len(history))
    if family != "exponential":
        raise ValueError(f"family: unknown trial family {family!r}")

    grid = tuple(rates) if rates is not None else (0.5, 0.75, 1.0, 1.25, 1.5)
    if not grid or any(r <= 0 for r in grid):
        raise ValueError("rates: need positive decay rates")
    grid = tuple(sorted(grid))[: int(budget)]

    evals = {}
    for r in grid:
        evals[r] = run(radial_exponential(center, radius, r)).quotient
    finite = {r: q for r, q in evals.items() if math.isfinite(q)}
    if not finite:
        raise RuntimeError("budget exhausted without a finite quotient")
    best = min(finite, key=finite.get)

    left = budget - len(grid)
    if left > 0 and len(grid) > 1:
        idx = grid.index(best)
        a = grid[max(idx - 1, 0)]
        b = grid[min(idx + 1, len(grid) - 1)]
        x1 = b - _GOLDEN * (b - a)
        x2 = a + _GOLDEN * (b - a)
        f1 = f2 = None
        # one fresh evaluation per pass; interval shrink steps are free
        while left > 0 and b - a > 1e-3:
            if f1 is None:
                f1 = run(radial_exponential(center, radius, x1)).quotient
                left -= 1
            elif f2 is None:
                f2 = run(radial_exponential(center, radius, x2)).quotient
                left -= 1
            elif f1 <= f2:
                b, x2, f2 = x2, x1, f1
                x1 = b - _GOLDEN * (b - a)
                f1 = None
            else:
                a, x1, f1 = x1, x2, f2
                x2 = a + _GOLDEN * (b - a)
                f2 = None

    pairs = [(t, e) for t, e in history if math.isfinite(e.quotient)]
    trial, est = min(pairs, key=lambda te: te[1].quotient)
    return MinimizeResult(trial, est, tuple(history), len(history))


@dataclasses.dataclass(frozen=True)
class CheegerEstimate:
    quotient: float
    stderr: float
    boundary: float
    boundary_stderr: float
    volume: float
    volume_stderr: float
    radius: float
    eps: float
    samples: int
    seed: int


def cheeger_quotient(
    body,
    center,
    radius,
    eps=0.1,
    samples=2**15,
    seed=0,
    resolution=None,
    density_samples=2048,
    strata=16,
    threads=None,
):
    """Boundary-measure over volume for the metric ball of the given radius.

    The boundary term is the outer Minkowski content of the ball: collar
    measures over (R, R + eps] and (R, R + eps/2], each a polar shell
    integral, combined by Richardson extrapolation 2 nu(eps/2) - nu(eps) to
    cancel the first-order collar curvature bias.  The three integrals use
    independent seeds, so the error propagation is exact to first order.
    On balls the quotient decreases to the Cheeger constant of the space as
    the radius grows.
    """
    center = np.asarray(center, dtype=float)
    R = float(radius)
    if R <= 0:
        raise ValueError("radius: need a positive ball radius")
    if eps <= 0:
        raise ValueError("eps: need a positive collar width")

    def one(X):
        return np.ones(len(X))

    common = dict(
        weight="hilbert-density",
        samples=samples,
        resolution=resolution,
        density_samples=density_samples,
        strata=strata,
        threads=threads,
    )
    vol = integrate(body, one, region=MetricBallRegion(center, R), seed=seed, **common)
    full = integrate(
        body, one, region=MetricBallRegion(center, R + eps, inner_radius=R), seed=seed + 1, **common
    )
    half = integrate(
        body,
        one,
        region=MetricBallRegion(center, R + 0.5 * eps, inner_radius=R),
        seed=seed + 2,
        **common,
    )
    boundary = (4.0 * half.value - full.value) / eps
    boundary_err = math.hypot(4.0 * half.stderr, full.stderr) / eps
    if not vol.value > 0:
        raise RuntimeError("volume estimate is not positive")
    q = boundary / vol.value
    rel = math.hypot(boundary_err / boundary if boundary else 0.0, vol.stderr / vol.value)
    return CheegerEstimate(
        q, abs(q) * rel, boundary, boundary_err, vol.value, vol.stderr, R, eps, samples, seed
    )


# ---------------------------------------------------------------------------
# solid cylinder: volume sandwich and the two closed-form facts behind it


@dataclasses.dataclass(frozen=True)
class CylinderSandwichReport:
    heights: np.ndarray
    base_points: np.ndarray
    ratios: np.ndarray
    ratio_stderrs: np.ndarray
    plain_ratios: np.ndarray
    alpha: np.ndarray
    lower: float
    upper: float
    within_bounds: bool
    alpha_necessary: bool
    worst_low: tuple
    worst_high: tuple
    spectral_constant: float


def cylinder_sandwich(
    heights=None,
    base_points=None,
    samples=2**13,
    resolution=None,
    seed=0,
    threads=None,
):
    """Measure the tangent-ball volume sandwich on the solid cylinder.

    For each base point q in the disk and height t, compares the 3-D tangent
    unit ball volume at (q, t) with alpha(t) times the 2-D volume at q.  The
    ratio must land in [2/3, 8] (within Monte Carlo slack).  `plain_ratios`
    drops the alpha factor; `alpha_necessary` records whether the unweighted
    lower bound fails somewhere, i.e. whether the fiber weight is genuinely
    needed near the flat caps.
    """
    body = cylinder()
    disk = unit_disk()
    t = np.asarray(
        heights if heights is not None else np.linspace(-0.9, 0.9, 13), dtype=float
    )
    Q = np.asarray(
        base_points
        if base_points is not None
        else [(0.0, 0.0), (0.35, 0.0), (0.0, 0.6), (-0.5, 0.35), (0.7, 0.0)],
        dtype=float,
    )
    if np.any(np.abs(t) >= 1.0):
        raise ValueError("heights: need |t| < 1, strictly inside the cylinder")
    if np.any(np.einsum("ij,ij->i", Q, Q) >= 1.0):
        raise ValueError("base_points: need points strictly inside the disk")

    alpha = fiber_weight(t)
    vol2 = np.array([tub_volume(disk, q, resolution=resolution).value for q in Q])
    ratios = np.empty((len(t), len(Q)))
    errs = np.empty_like(ratios)
    for i, ti in enumerate(t):
        for j, q in enumerate(Q):
            p = np.array([q[0], q[1], ti])
            est = tub_volume(
                body, p, resolution=resolution, samples=samples,
                seed=seed + 9973 * i + j, threads=threads,
            )
            ratios[i, j] = est.value / (alpha[i] * vol2[j])
            errs[i, j] = est.stderr / (alpha[i] * vol2[j])
    plain = ratios * alpha[:, None]

    slack = 5.0 * errs
    within = bool(np.all(ratios >= SANDWICH_LOWER - slack) and np.all(ratios <= SANDWICH_UPPER + slack))
    low = np.unravel_index(np.argmin(ratios), ratios.shape)
    high = np.unravel_index(np.argmax(ratios), ratios.shape)
    necessary = bool(np.any(plain + slack < SANDWICH_LOWER))
    return CylinderSandwichReport(
        t,
        Q,
        ratios,
        errs,
        plain,
        alpha,
        SANDWICH_LOWER,
        SANDWICH_UPPER,
        within,
        necessary,
        (float(t[low[0]]), tuple(Q[low[1]]), float(ratios[low])),
        (float(t[high[0]]), tuple(Q[high[1]]), float(ratios[high])),
        SPECTRAL_LOWER_BOUND,
    )


@dataclasses.dataclass(frozen=True)
class Fact1Report:
    max_defect: float
    heights: np.ndarray
    base_points: np.ndarray
    defects: np.ndarray


def fact1_check(heights=None, base_points=None):
    """Vertical Finsler norm on the cylinder equals 1/alpha(t), exactly.

    The vertical chord through (q, t) never meets the disk factor, so the
    norm is the interval norm 1/(1 - t^2) independent of the base point q.
    Returns the worst deviation of F((q,t), e_z) * alpha(t) from 1 over a
    grid; closed-form algebra, so the defect is rounding-level.
    """
    body = cylinder()
    t = np.asarray(
        heights if heights is not None else np.linspace(-0.95, 0.95, 39), dtype=float
    )
    Q = np.asarray(
        base_points
        if base_points is not None
        else [(0.0, 0.0), (0.5, 0.0), (0.0, -0.7), (0.6, 0.6)],
        dtype=float,
    )
    if np.any(np.abs(t) >= 1.0) or np.any(np.einsum("ij,ij->i", Q, Q) >= 1.0):
        raise ValueError("grid: points must be strictly inside the cylinder")
    P = np.empty((len(t) * len(Q), 3))
    P[:, :2] = np.repeat(Q, len(t), axis=0)
    P[:, 2] = np.tile(t, len(Q))
    U = np.tile(np.array([0.0, 0.0, 1.0]), (len(P), 1))
    F = finsler_norm_batch(body, P, U)
    defects = np.abs(F * fiber_weight(P[:, 2]) - 1.0).reshape(len(Q), len(t)).T
    return Fact1Report(float(defects.max()), t, Q, defects)


@dataclasses.dataclass(frozen=True)
class Fact2Report:
    cap_height: float
    max_defect: float
    tilts: np.ndarray
    azimuths: np.ndarray
    heights: np.ndarray


def fact2_check(l1=1.0, l2=0.5, width=8.0, tilts=None, azimuths=None):
    """Flat caps put a plateau on the tangent unit ball of a slab product.

    On the wide disk times (-l2, l1), the tangent unit ball at the origin has
    a flat top at height 2 l1 l2 / (l1 + l2): the boundary point along any
    direction tilted by theta from vertical is v/F(v) and its z-component is
    independent of both the tilt and the azimuth while the chord still exits
    through the caps.  Checks that identity on a grid of directions and
    returns the worst deviation from the harmonic-mean height.
    """
    if l1 <= 0 or l2 <= 0:
        raise ValueError("l1, l2: need positive cap distances")
    th = np.asarray(tilts if tilts is not None else np.linspace(0.0, 0.12, 13), dtype=float)
    ph = np.asarray(
        azimuths if azimuths is not None else np.linspace(0.0, 2.0 * np.pi, 8, endpoint=False),
        dtype=float,
    )
    if np.any(th < 0) or np.tan(th.max()) * max(l1, l2) >= 0.5 * width:
        raise ValueError("tilts: tilt leaves the flat-cap regime for this width")
    body = slab_product(l1, l2, width)
    cap = 2.0 * l1 * l2 / (l1 + l2)
    T, P = np.meshgrid(th, ph, indexing="ij")
    V = np.column_stack(
        [
            (np.sin(T) * np.cos(P)).ravel(),
            (np.sin(T) * np.sin(P)).ravel(),
            np.cos(T).ravel(),
        ]
    )
    X = np.zeros_like(V)
    F = finsler_norm_batch(body, X, V)
    heights = (V[:, 2] / F).reshape(len(th), len(ph))
    return Fact2Report(cap, float(np.abs(heights - cap).max()), th, ph, heights)
