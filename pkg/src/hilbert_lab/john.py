"""Maximum-volume inscribed ellipsoids and the Riemannian data they induce.

For half-space bodies the ellipsoid solves the standard log-det program
(variables: the PSD shape factor B and the centre d) with the containment
constraints |B a_i| + <a_i, d> <= b_i.  Balls, ellipsoids and affine images
are handled exactly by dispatch, since the maximiser commutes with affine
maps.  Bodies known only through oracles (products, outer parallel bodies)
are sandwiched: an outer support-function polytope P >= C is solved, and the
resulting ellipsoid is shrunk about its centre by 1 - g/a_min, where g
bounds how far P sticks out of C (max radial overshoot over the vertices of
P) and a_min is the smallest semi-axis.  A norm triangle inequality plus a
separating hyperplane argument shows the shrunk ellipsoid lies in the
closure of C, so the shrink is a certificate, not a heuristic.  Every
construction is finally probed by membership at about a thousand
just-inside boundary points.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .bodies import BodyValidationError, NotInteriorError
from .directions import sphere_grid, sphere_nested
from .measure import euclidean_ball_volume, tangent_unit_ball

_PROBE_SHRINK = 1.0 - 1e-9
_N_PROBES = 1000


@dataclasses.dataclass(frozen=True)
class Ellipsoid:
    """Open ellipsoid {x : (x - center)^T shape (x - center) < 1}."""

    center: np.ndarray
    shape: np.ndarray

    @property
    def dim(self):
        return len(self.center)

    def volume(self):
        return euclidean_ball_volume(self.dim) / np.sqrt(np.linalg.det(self.shape))

    def semi_axes(self):
        """Semi-axis lengths, ascending."""
        return 1.0 / np.sqrt(np.linalg.eigvalsh(self.shape)[::-1])

    def radial(self, dirs):
        """Distance from the centre to the boundary in each direction."""
        dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
        return 1.0 / np.sqrt(np.einsum("ij,jk,ik->i", dirs, self.shape, dirs))

    def boundary_points(self, dirs):
        dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
        return self.center + self.radial(dirs)[:, None] * dirs

    def contains(self, x):
        y = np.asarray(x, dtype=float) - self.center
        return float(y @ self.shape @ y) < 1.0

    def scaled(self, factor):
        return Ellipsoid(self.center, self.shape / factor**2)


@dataclasses.dataclass(frozen=True)
class SandwichReport:
    """Probe record for E <= C <= lambda E about the ellipsoid centre."""

    contained: bool
    cover_factor: float
    symmetric: bool
    bound: float
    bound_satisfied: bool
    witness_direction: np.ndarray
    probes: int


@dataclasses.dataclass(frozen=True)
class JohnMetric:
    """Inner product g at a point, from the pinned ellipsoid of the tangent ball."""

    point: np.ndarray
    inner: np.ndarray
    ellipsoid: Ellipsoid

    def norm(self, v):
        v = np.asarray(v, dtype=float)
        return float(np.sqrt(v @ self.inner @ v))


def _solve_inscribed(A, b, pin_center=None):
    """Max-volume ellipsoid inside {A x <= b} via the log-det program.

    Returns (center, B) with B the PSD factor; the ellipsoid is
    {d + B u : |u| < 1}.  The factor is rescaled post hoc so every facet
    constraint holds exactly, which turns solver tolerance into a one-sided
    volume loss of the same order.
    """
    import warnings

    import cvxpy as cp

    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    norms = np.linalg.norm(A, axis=1)
    A = A / norms[:, None]
    b = b / norms
    n = A.shape[1]
    B = cp.Variable((n, n), PSD=True)
    if pin_center is None:
        d = cp.Variable(n)
        lin = A @ d
    else:
        d = np.asarray(pin_center, dtype=float)
        lin = A @ d
    cons = [cp.norm(B @ A.T, 2, axis=0) + lin <= b]
    prob = cp.Problem(cp.Maximize(cp.log_det(B)), cons)
    # ask for tight tolerances first; large 3-d systems sometimes blow up
    # there, so fall back to stock settings.  near-optimal stalls are fine
    # either way because containment is certified post hoc.
    attempts = (
        (cp.CLARABEL, dict(tol_gap_abs=1e-11, tol_gap_rel=1e-11, tol_feas=1e-11, max_iter=200)),
        (cp.CLARABEL, {}),
        (cp.SCS, dict(eps=1e-9, max_iters=50000)),
    )
    status = None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for solver, opts in attempts:
            try:
                prob.solve(solver=solver, **opts)
            except cp.error.SolverError:
                continue
            status = prob.status
            if status in ("optimal", "optimal_inaccurate"):
                break
    if status not in ("optimal", "optimal_inaccurate"):
        raise RuntimeError(f"inscribed-ellipsoid solve failed with status {status!r}")
    Bv = 0.5 * (B.value + B.value.T)
    center = d if pin_center is not None else d.value
    slack = b - A @ center
    if np.any(slack <= 0.0):
        raise RuntimeError("inscribed-ellipsoid solve returned an exterior centre")
    margin = np.linalg.norm(Bv @ A.T, axis=0) / slack
    worst = margin.max()
    if worst > 1.0:
        Bv = Bv / worst
    return np.asarray(center, dtype=float), Bv


def _ellipsoid_from_factor(center, B):
    w, Q = np.linalg.eigh(B)
    w = np.maximum(w, 1e-300)
    shape = Q @ np.diag(w**-2.0) @ Q.T
    return Ellipsoid(np.asarray(center, dtype=float), 0.5 * (shape + shape.T))


def _probe_containment(body, ell, n_probes=_N_PROBES):
    """Membership probes at just-inside boundary points; shrinks a hair if a
    probe fails, and raises if that does not settle it."""
    dirs = sphere_nested(body.dim, n_probes)
    ell_out = ell
    for _ in range(32):
        pts = ell_out.center + _PROBE_SHRINK * ell_out.radial(dirs)[:, None] * dirs
        if np.all(body.contains_batch(pts)):
            return ell_out
        ell_out = ell_out.scaled(1.0 - 1e-6)
    raise RuntimeError("containment probes kept failing after shrinking")


def john_ellipsoid(body, facet_budget=None):
    """Maximum-volume inscribed ellipsoid of the body.

    Exact by dispatch for quadric kinds and affine images, a log-det solve
    for half-space kinds, and an outer-polytope solve with certified shrink
    for oracle kinds.  `facet_budget` controls the support directions in the
    oracle path (defaults: 256 in the plane, 512 in dimension 3).
    """
    kind = body.kind
    if kind == "ball":
        return Ellipsoid(np.zeros(body.dim), np.eye(body.dim))
    if kind == "ellipsoid":
        return Ellipsoid(body.center.copy(), body.shape.copy())
    if kind == "affine":
        inner = john_ellipsoid(body.base, facet_budget)
        c = body.map @ inner.center + body.shift
        shape = body.map_inv.T @ inner.shape @ body.map_inv
        return Ellipsoid(c, 0.5 * (shape + shape.T))
    if kind in ("hpolytope", "vpolytope"):
        center, B = _solve_inscribed(body.A, body.b)
        return _probe_containment(body, _ellipsoid_from_factor(center, B))
    return _oracle_john(body, facet_budget)


def _structural_normals(body):
    """Directions whose support planes are exact on flat pieces of the body.

    Facet normals of polytope parts and factor-pure directions of products
    (a factor direction padded with zeros).  Without these the outer
    polytope over a flat face is a shallow tent whose apex overshoots by the
    tilt of the nearest sampled direction, which wrecks the certified
    shrink; with them the flats are supported exactly.
    """
    out = []
    if body.kind in ("hpolytope", "vpolytope"):
        out.append(body.A / np.linalg.norm(body.A, axis=1, keepdims=True))
    elif body.kind == "product":
        off = 0
        for f in body.factors:
            d = f.dim
            sub = np.vstack([sphere_grid(d, 64 if d > 1 else 2)] + _structural_normals(f))
            block = np.zeros((len(sub), body.dim))
            block[:, off : off + d] = sub
            out.append(block)
            off += d
    elif body.kind == "minkowski_ball":
        out.extend(_structural_normals(body.base))
    elif body.kind == "affine":
        for block in _structural_normals(body.base):
            mapped = block @ body.map_inv
            mapped /= np.linalg.norm(mapped, axis=1, keepdims=True)
            out.append(mapped)
    return out


def _oracle_john(body, facet_budget=None):
    from scipy.spatial import HalfspaceIntersection

    n = body.dim
    if facet_budget is None:
        facet_budget = 256 if n == 2 else 512
    if facet_budget < 2 * n + 2:
        raise ValueError(f"facet_budget: need at least {2 * n + 2} directions")
    if n > 3:
        raise BodyValidationError("body", "oracle-kind ellipsoids need dimension at most 3")
    dirs = np.vstack([sphere_grid(n, facet_budget), np.eye(n), -np.eye(n)] + _structural_normals(body))
    h = body.support_batch(dirs)
    center0, B = _solve_inscribed(dirs, h)
    ell = _ellipsoid_from_factor(center0, B)
    # vertices of the outer polytope, then their radial overshoot past the body
    p0 = body.interior_point()
    hs = np.hstack([dirs, -h[:, None]])
    verts = HalfspaceIntersection(hs, p0).intersections
    V = verts - p0
    speed = np.linalg.norm(V, axis=1)
    live = speed > 1e-12
    _, tp = body.chord_batch(np.tile(p0, (live.sum(), 1)), V[live])
    overshoot = np.maximum(0.0, (1.0 - np.minimum(tp, 1.0)) * speed[live])
    g = float(overshoot.max()) if len(overshoot) else 0.0
    a_min = ell.semi_axes()[0]
    if g >= a_min:
        raise RuntimeError(
            f"outer polytope too loose (gap {g:.3g} vs semi-axis {a_min:.3g}); raise facet_budget"
        )
    lam = 1.0 - g / a_min
    return _probe_containment(body, ell.scaled(lam))


def _golden_scalar_max(g, lo, hi, iters=40):
    gold = 0.6180339887498949
    x1 = hi - gold * (hi - lo)
    x2 = lo + gold * (hi - lo)
    f1, f2 = g(x1), g(x2)
    for _ in range(iters):
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + gold * (hi - lo)
            f2 = g(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - gold * (hi - lo)
            f1 = g(x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def _refine_cover(body, ell, u0, f0, span, rounds=3):
    """Polish a sampled maximum of the radial cover ratio t+ / r_E.

    t+ and r_E both scale as 1/|v| in the direction, so the ratio is
    scale-invariant and the search can run in raw angle coordinates.  The
    window `span` must exceed the angular gap of the probe grid so the true
    local maximum (often a kink, e.g. a polytope vertex) stays bracketed;
    every evaluation is an exact ratio, hence the polish can only tighten
    the estimate, never overshoot the supremum.
    """
    from .metric import _complement_basis

    c = np.asarray(ell.center, dtype=float)

    def ratio(v):
        _, tp = body.chord_batch(c[None, :], np.atleast_2d(v))
        return float(tp[0] * np.sqrt(v @ ell.shape @ v))

    u = np.asarray(u0, dtype=float) / np.linalg.norm(u0)
    best = f0
    h = span
    for _ in range(rounds):
        for w in _complement_basis(u[None, :])[0].T:
            th, val = _golden_scalar_max(
                lambda t, w=w: ratio(np.cos(t) * u + np.sin(t) * w), -h, h
            )
            if val > best:
                best = val
                u = np.cos(th) * u + np.sin(th) * w
                u /= np.linalg.norm(u)
        h *= 0.25
    return best, u


def sandwich_check(body, ell=None, probes=10**4, tol=1e-9):
    """Probe E <= C <= lambda E and compare lambda to the John bound.

    The applicable bound is sqrt(n) when the probes find the body symmetric
    about the ellipsoid centre and n otherwise; `bound_satisfied` reports it
    with a 1e-3 slack.  Violations are reported, not raised, so callers can
    flag them.
    """
    if ell is None:
        ell = john_ellipsoid(body)
    n = body.dim
    k = max(probes // 2, 8)
    dirs = sphere_nested(n, k)
    c = np.asarray(ell.center, dtype=float)
    if not body.contains(c):
        raise NotInteriorError("ellipsoid centre is not interior to the body")
    tm, tp = body.chord_batch(np.tile(c, (k, 1)), dirs)
    r_ell = ell.radial(dirs)
    ratios = np.concatenate([tp / r_ell, -tm / r_ell])
    all_dirs = np.vstack([dirs, -dirs])
    i_max = int(np.argmax(ratios))
    span = 16.0 / k if n == 2 else 4.0 * np.sqrt(2.0 / k)
    cover, u_max = _refine_cover(body, ell, all_dirs[i_max], float(ratios[i_max]), span)
    contained = bool(ratios.min() >= 1.0 - tol)
    asym = np.abs(tp + tm) / (tp - tm)
    symmetric = bool(asym.max() <= 1e-6)
    bound = np.sqrt(n) if symmetric else float(n)
    return SandwichReport(
        contained=contained,
        cover_factor=cover,
        symmetric=symmetric,
        bound=bound,
        bound_satisfied=bool(cover <= bound + 1e-3),
        witness_direction=u_max,
        probes=2 * k,
    )


def john_metric_at(body, p, resolution=None):
    """Riemannian approximation at p: the centre-pinned maximum-volume
    ellipsoid of the tangent unit ball, returned with its inner product."""
    from scipy.spatial import ConvexHull

    p = np.asarray(p, dtype=float)
    if not body.contains(p):
        raise NotInteriorError("p: base point is not interior to the body")
    tub = tangent_unit_ball(body, p, resolution)
    pts = tub.radial[:, None] * tub.directions
    hull = ConvexHull(pts)
    A = hull.equations[:, : body.dim]
    b = -hull.equations[:, body.dim]
    _, B = _solve_inscribed(A, b, pin_center=np.zeros(body.dim))
    ell = _ellipsoid_from_factor(np.zeros(body.dim), B)
    return JohnMetric(point=p, inner=ell.shape, ellipsoid=ell)
