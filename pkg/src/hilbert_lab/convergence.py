"""Convergence of Hilbert geometries along decreasing families of bodies.

A family of bodies decreasing to a limit pulls the Finsler norms up to the
limit norm from below: at a fixed interior point the member norm is a
fraction M <= 1 of the limit norm, and M -> 1 as the member shrinks onto the
limit.  The Busemann densities then converge with an explicit two-sided
bound: h_member <= h_limit from tangent-ball inclusion, and
h_member >= (inf M)^n h_limit because scaling the norm by m scales the
tangent ball by 1/m.  This module measures both effects on probe grids.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .bodies import EllipsoidBody, MinkowskiBall
from .directions import sphere_grid
from .gallery import cylinder, unit_disk
from .measure import density_batch
from .metric import finsler_norm_batch

NESTING_TOL = 1e-9


@dataclasses.dataclass(frozen=True)
class NormRatioField:
    points: np.ndarray
    directions: np.ndarray
    ratios: np.ndarray
    min_ratio: float
    max_ratio: float
    nested: bool


def norm_ratio_field(limit_body, member_body, points, directions=None):
    """Ratios F_member / F_limit on a grid of points and directions.

    For a member containing the limit the ratio lies in (0, 1]; `nested`
    records whether the sampled maximum respects that bound.  Points must be
    interior to the limit (hence to any containing member).
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    n = limit_body.dim
    if member_body.dim != n:
        raise ValueError("member: dimension mismatch with the limit body")
    if directions is None:
        directions = sphere_grid(n, 32)
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    m, d = len(points), len(directions)
    P = np.repeat(points, d, axis=0)
    V = np.tile(directions, (m, 1))
    F_lim = finsler_norm_batch(limit_body, P, V).reshape(m, d)
    F_mem = finsler_norm_batch(member_body, P, V).reshape(m, d)
    ratios = F_mem / F_lim
    return NormRatioField(
        points,
        directions,
        ratios,
        float(ratios.min()),
        float(ratios.max()),
        bool(ratios.max() <= 1.0 + NESTING_TOL),
    )


@dataclasses.dataclass(frozen=True)
class MemberDensityReport:
    min_norm_ratio: float
    sup_deviation: float
    upper_ok: bool
    lower_ok: bool
    worst_point: np.ndarray


@dataclasses.dataclass(frozen=True)
class ConvergenceReport:
    members: tuple
    deviations: np.ndarray
    monotone: bool
    converged: bool


def density_convergence(
    members,
    limit_body,
    points,
    directions=None,
    resolution=None,
    samples=2048,
    seed=0,
    tol=1e-3,
):
    """Per-member density comparison against the limit body.

    For each member reports sup |h_member/h_limit - 1| over the probe points
    and checks the two-sided bound: h_member below h_limit (inclusion) and
    above (inf M)^n h_limit with M the norm-ratio field over the same points.
    Monte Carlo slack is five reported standard errors plus `tol`.
    `monotone` asks the deviations to be non-increasing along the family
    (the natural order: each member inside the previous), `converged` that
    the last deviation improves on the first.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    n = limit_body.dim
    h_lim, e_lim = density_batch(
        limit_body, points, resolution=resolution, samples=samples, seed=seed
    )
    reports = []
    for i, member in enumerate(members):
        field = norm_ratio_field(limit_body, member, points, directions)
        h_mem, e_mem = density_batch(
            member, points, resolution=resolution, samples=samples, seed=seed + 1 + i
        )
        ratio = h_mem / h_lim
        dev = np.abs(ratio - 1.0)
        slack = 5.0 * np.hypot(e_mem / h_mem, e_lim / h_lim) + tol
        upper = bool(np.all(ratio <= 1.0 + slack))
        lower = bool(np.all(ratio >= field.min_ratio**n * (1.0 - slack)))
        reports.append(
            MemberDensityReport(
                field.min_ratio,
                float(dev.max()),
                upper,
                lower,
                points[int(np.argmax(dev))],
            )
        )
    devs = np.array([r.sup_deviation for r in reports])
    monotone = bool(np.all(np.diff(devs) <= tol + 5e-2 * devs[:-1]))
    converged = bool(len(devs) < 2 or devs[-1] < devs[0])
    return ConvergenceReport(tuple(reports), devs, monotone, converged)


def concentric_disks(ks=(1, 2, 4, 8, 16)):
    """Disks of radius 1 + 1/k decreasing to the unit disk."""
    if any(k <= 0 for k in ks):
        raise ValueError("ks: need positive indices")
    members = [
        EllipsoidBody(np.zeros(2), np.eye(2) / (1.0 + 1.0 / k) ** 2) for k in ks
    ]
    return members, unit_disk()


def smoothed_cylinders(ks=(2, 4, 8)):
    """Outer parallel bodies of the solid cylinder at distance 1/k.

    The members are smooth (rounded edges) while the limit is not; the
    family exercises density convergence across a certification boundary,
    since parallel-body chords come from bisection rather than closed form.
    """
    if any(k <= 0 for k in ks):
        raise ValueError("ks: need positive indices")
    base = cylinder()
    return [MinkowskiBall(cylinder(), 1.0 / k) for k in ks], base
