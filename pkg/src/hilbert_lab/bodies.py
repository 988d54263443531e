"""Bounded open convex bodies with membership and chord oracles.

A body is an open bounded convex subset of R^n.  Every body answers strict
membership queries and computes chords: given an interior point x and a
direction v != 0, the chord is the parameter interval (t_minus, t_plus) with
t_minus < 0 < t_plus such that x + t*v lies in the body exactly for
t in (t_minus, t_plus).  All metric quantities downstream reduce to chords,
so `chord_batch` is the performance-critical primitive and is vectorised
over rows of (points, directions).

Quadrics, half-space systems and products have closed-form chords and are
exact.  Outer-parallel bodies (Minkowski sum with a ball) fall back to a
bisection on strict membership; their chords are certified only to
CHORD_REL_TOL and carry `certified=False`.  Affine images delegate to the
base body through the inverse map; line parameters are affine invariants, so
no accuracy is lost.
"""

from __future__ import annotations

import dataclasses
import json

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

# Relative tolerance on bisected chord endpoints.  Closed-form chords are
# exact to rounding and ignore this.
CHORD_REL_TOL = 1e-12
BISECT_MAX_ITER = 200


class BodyValidationError(ValueError):
    """A body definition is inconsistent; the message names the bad field."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class NotInteriorError(ValueError):
    """An operation required a strictly interior point and did not get one."""


@dataclasses.dataclass(frozen=True)
class Chord:
    """Exit parameters of a line x + t*v through a body: t_minus < 0 < t_plus."""

    t_minus: float
    t_plus: float
    certified: bool = True

    @property
    def length_params(self):
        return self.t_plus - self.t_minus


def _as_point(x, dim, name="x"):
    x = np.asarray(x, dtype=float)
    if x.shape != (dim,):
        raise ValueError(f"{name} must have shape ({dim},), got {x.shape}")
    return x


class ConvexBody:
    """Base class; subclasses implement the batch oracles."""

    kind = "abstract"
    is_exact = True

    def __init__(self, dim):
        self.dim = int(dim)

    # -- batch oracles -------------------------------------------------

    def contains_batch(self, X):
        raise NotImplementedError

    def _chord_batch(self, P, V):
        """Chords for row pairs; preconditions already checked."""
        raise NotImplementedError

    # -- scalar wrappers -----------------------------------------------

    def contains(self, x):
        x = _as_point(x, self.dim)
        return bool(self.contains_batch(x[None, :])[0])

    def chord(self, x, v):
        x = _as_point(x, self.dim)
        v = _as_point(v, self.dim, "v")
        if not np.any(v):
            raise ValueError("v: direction must be nonzero")
        if not self.contains(x):
            raise NotInteriorError("x: base point is not interior to the body")
        tm, tp = self._chord_batch(x[None, :], v[None, :])
        return Chord(float(tm[0]), float(tp[0]), certified=self.is_exact)

    def chord_batch(self, P, V):
        """Vectorised chords.  P, V are (m, dim); returns (t_minus, t_plus)."""
        P = np.asarray(P, dtype=float)
        V = np.asarray(V, dtype=float)
        if P.shape != V.shape or P.ndim != 2 or P.shape[1] != self.dim:
            raise ValueError(f"P, V must both be (m, {self.dim})")
        return self._chord_batch(P, V)

    # -- geometry helpers ----------------------------------------------

    def interior_point(self):
        raise NotImplementedError

    def bounding_box(self):
        """(lo, hi) with the body contained in the closed box."""
        raise NotImplementedError

    def support(self, u):
        """Support value sup_{x in closure} <u, x>."""
        return self.support_batch(np.asarray(u, dtype=float)[None, :])[0]

    def support_batch(self, U):
        raise NotImplementedError(f"support oracle not available for kind {self.kind!r}")

    def distance_to_closure_batch(self, X):
        """Euclidean distance from X rows to the closure (0 inside)."""
        raise NotImplementedError(
            f"distance oracle not available for kind {self.kind!r}"
        )

    def to_json(self):
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} dim={self.dim}>"


# ----------------------------------------------------------------------
# quadrics


def _quadratic_chord(a, b, c):
    """Roots of a t^2 + 2 b t + c with a > 0, c < 0 (origin inside).

    Returns (t_minus, t_plus).  Uses the cancellation-free branch for the
    root on the same side as b.
    """
    s = np.sqrt(b * b - a * c)
    tp = np.where(b >= 0, -c / (s + b), (s - b) / a)
    tm = c / (a * tp)
    return tm, tp


class Ball(ConvexBody):
    """Open unit ball centred at the origin."""

    kind = "ball"

    def contains_batch(self, X):
        X = np.asarray(X, dtype=float)
        return np.einsum("ij,ij->i", X, X) < 1.0

    def _chord_batch(self, P, V):
        a = np.einsum("ij,ij->i", V, V)
        b = np.einsum("ij,ij->i", P, V)
        c = np.einsum("ij,ij->i", P, P) - 1.0
        return _quadratic_chord(a, b, c)

    def interior_point(self):
        return np.zeros(self.dim)

    def bounding_box(self):
        return -np.ones(self.dim), np.ones(self.dim)

    def support_batch(self, U):
        return np.linalg.norm(U, axis=1)

    def distance_to_closure_batch(self, X):
        return np.maximum(0.0, np.linalg.norm(X, axis=1) - 1.0)

    def to_json(self):
        return {"type": "ball", "dim": self.dim}


class EllipsoidBody(ConvexBody):
    """Open ellipsoid {x : (x-c)^T M (x-c) < 1} with M symmetric positive definite."""

    kind = "ellipsoid"

    def __init__(self, center, shape):
        center = np.asarray(center, dtype=float)
        shape = np.asarray(shape, dtype=float)
        if center.ndim != 1:
            raise BodyValidationError("center", "must be a vector")
        n = center.size
        if shape.shape != (n, n):
            raise BodyValidationError("shape", f"must be {n}x{n} to match center")
        if not np.allclose(shape, shape.T, rtol=0.0, atol=1e-10 * max(1.0, np.abs(shape).max())):
            raise BodyValidationError("shape", "matrix must be symmetric")
        shape = 0.5 * (shape + shape.T)
        w = np.linalg.eigvalsh(shape)
        if w[0] <= 0.0:
            raise BodyValidationError("shape", f"matrix must be positive definite (min eigenvalue {w[0]:g})")
        super().__init__(n)
        self.center = center
        self.shape = shape
        self.shape_inv = np.linalg.inv(shape)

    def contains_batch(self, X):
        Y = np.asarray(X, dtype=float) - self.center
        return np.einsum("ij,jk,ik->i", Y, self.shape, Y) < 1.0

    def _chord_batch(self, P, V):
        Y = P - self.center
        MV = V @ self.shape
        a = np.einsum("ij,ij->i", V, MV)
        b = np.einsum("ij,ij->i", Y, MV)
        c = np.einsum("ij,jk,ik->i", Y, self.shape, Y) - 1.0
        return _quadratic_chord(a, b, c)

    def interior_point(self):
        return self.center.copy()

    def bounding_box(self):
        half = np.sqrt(np.diag(self.shape_inv))
        return self.center - half, self.center + half

    def support_batch(self, U):
        U = np.asarray(U, dtype=float)
        q = np.einsum("ij,jk,ik->i", U, self.shape_inv, U)
        return U @ self.center + np.sqrt(q)

    def distance_to_closure_batch(self, X):
        # Euclidean distance to the ellipsoid surface: in eigencoordinates the
        # foot point solves sum(b_i^2 y_i^2 / (b_i^2 + s)^2) = 1 for s >= 0,
        # a decreasing scalar equation bisected for all outside points at once.
        X = np.asarray(X, dtype=float)
        w, Q = np.linalg.eigh(self.shape)
        b2 = 1.0 / w  # squared semi-axes
        Y = (X - self.center) @ Q
        out = np.zeros(len(X))
        outside = np.einsum("ij,j,ij->i", Y, w, Y) > 1.0
        if not np.any(outside):
            return out
        y2 = Y[outside] ** 2
        lo = np.zeros(len(y2))
        hi = np.sqrt((b2 * y2).sum(axis=1)) + b2.max()

        def f(s):
            return (b2 * y2 / (b2 + s[:, None]) ** 2).sum(axis=1) - 1.0

        while np.any(f(hi) > 0.0):
            hi = np.where(f(hi) > 0.0, 2.0 * hi, hi)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            pos = f(mid) > 0.0
            lo = np.where(pos, mid, lo)
            hi = np.where(pos, hi, mid)
            if np.all(hi - lo <= 1e-14 * np.maximum(1.0, hi)):
                break
        s = 0.5 * (lo + hi)
        foot = b2 * Y[outside] / (b2 + s[:, None])
        out[outside] = np.linalg.norm(Y[outside] - foot, axis=1)
        return out

    def to_json(self):
        return {
            "type": "ellipsoid",
            "center": self.center.tolist(),
            "shape": self.shape.tolist(),
        }


# ----------------------------------------------------------------------
# polytopes


class HPolytope(ConvexBody):
    """Open polytope {x : A x < b}.  Validated bounded with nonempty interior."""

    kind = "hpolytope"

    def __init__(self, A, b, _skip_checks=False):
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.asarray(b, dtype=float).ravel()
        if A.ndim != 2:
            raise BodyValidationError("A", "must be a matrix")
        if b.shape != (A.shape[0],):
            raise BodyValidationError("b", f"must have one entry per row of A, got {b.shape}")
        norms = np.linalg.norm(A, axis=1)
        if np.any(norms == 0.0):
            raise BodyValidationError("A", f"row {int(np.argmin(norms))} is zero")
        super().__init__(A.shape[1])
        self.A = A
        self.b = b
        self._row_norms = norms
        if _skip_checks:
            self._interior = None
            self._bbox = None
            return
        self._interior = self._chebyshev_center()
        self._bbox = self._compute_bbox()

    def _chebyshev_center(self):
        n, m = self.dim, len(self.b)
        c = np.zeros(n + 1)
        c[-1] = -1.0
        A_ub = np.hstack([self.A, self._row_norms[:, None]])
        res = linprog(c, A_ub=A_ub, b_ub=self.b, bounds=[(None, None)] * n + [(0, None)], method="highs")
        if not res.success or res.x[-1] <= 0.0:
            raise BodyValidationError("b", "system A x < b has no interior point")
        return res.x[:n]

    def _compute_bbox(self):
        lo = np.empty(self.dim)
        hi = np.empty(self.dim)
        for i in range(self.dim):
            c = np.zeros(self.dim)
            c[i] = 1.0
            r = linprog(c, A_ub=self.A, b_ub=self.b, bounds=[(None, None)] * self.dim, method="highs")
            if not r.success:
                raise BodyValidationError("A", f"polytope unbounded below in coordinate {i}")
            lo[i] = r.fun
            r = linprog(-c, A_ub=self.A, b_ub=self.b, bounds=[(None, None)] * self.dim, method="highs")
            if not r.success:
                raise BodyValidationError("A", f"polytope unbounded above in coordinate {i}")
            hi[i] = -r.fun
        return lo, hi

    def contains_batch(self, X):
        S = np.asarray(X, dtype=float) @ self.A.T
        return np.all(S < self.b, axis=1)

    def _chord_batch(self, P, V):
        R = self.b - P @ self.A.T  # slacks, > 0 at interior points
        S = V @ self.A.T
        with np.errstate(divide="ignore", invalid="ignore"):
            T = R / S
        tp = np.where(S > 0, T, np.inf).min(axis=1)
        tm = np.where(S < 0, T, -np.inf).max(axis=1)
        return tm, tp

    def interior_point(self):
        return self._interior.copy()

    def bounding_box(self):
        return self._bbox

    def support_batch(self, U):
        U = np.asarray(U, dtype=float)
        out = np.empty(len(U))
        for i, u in enumerate(U):
            r = linprog(-u, A_ub=self.A, b_ub=self.b, bounds=[(None, None)] * self.dim, method="highs")
            if not r.success:
                raise BodyValidationError("A", "support LP failed; polytope may be unbounded")
            out[i] = -r.fun
        return out

    def distance_to_closure_batch(self, X):
        X = np.asarray(X, dtype=float)
        out = np.zeros(len(X))
        outside = ~np.all(X @ self.A.T <= self.b, axis=1)
        if not np.any(outside):
            return out
        if self.dim == 1:
            lo, hi = self.bounding_box()
            x = X[outside, 0]
            out[outside] = np.maximum(lo[0] - x, x - hi[0]).clip(min=0.0)
        elif self.dim == 2:
            out[outside] = _polygon_distance(self._polygon_vertices(), X[outside])
        else:
            out[outside] = _dykstra_distance(self.A, self.b, self._row_norms, X[outside])
        return out

    def _polygon_vertices(self):
        """Boundary vertices in counterclockwise order (dimension 2 only)."""
        if getattr(self, "_poly_verts", None) is None:
            from scipy.spatial import HalfspaceIntersection

            hs = np.hstack([self.A, -self.b[:, None]])
            pts = HalfspaceIntersection(hs, self.interior_point()).intersections
            c = pts.mean(axis=0)
            order = np.argsort(np.arctan2(pts[:, 1] - c[1], pts[:, 0] - c[0]))
            self._poly_verts = pts[order]
        return self._poly_verts

    def to_json(self):
        return {"type": "hpolytope", "A": self.A.tolist(), "b": self.b.tolist()}


class VPolytope(HPolytope):
    """Open convex hull interior of a vertex list; dimensions 1 to 3 only.

    Facet enumeration uses the convex hull; above dimension 3 construction is
    refused rather than done badly.
    """

    kind = "vpolytope"

    def __init__(self, vertices):
        vertices = np.atleast_2d(np.asarray(vertices, dtype=float))
        n = vertices.shape[1]
        if n > 3:
            raise BodyValidationError("vertices", "facet enumeration above dimension 3 is not supported")
        if n == 1:
            lo, hi = vertices.min(), vertices.max()
            if hi - lo <= 0.0:
                raise BodyValidationError("vertices", "interval has empty interior")
            A = np.array([[1.0], [-1.0]])
            b = np.array([hi, -lo])
        else:
            if len(vertices) < n + 1:
                raise BodyValidationError("vertices", f"need at least {n + 1} points in dimension {n}")
            try:
                hull = ConvexHull(vertices)
            except QhullError as e:
                raise BodyValidationError("vertices", f"hull is not full-dimensional: {e}") from e
            A = hull.equations[:, :n]
            b = -hull.equations[:, n]
        super().__init__(A, b)
        self.vertices = vertices
        if n == 2:
            self._poly_verts = vertices[hull.vertices]

    def support_batch(self, U):
        return (np.asarray(U, dtype=float) @ self.vertices.T).max(axis=1)

    def to_json(self):
        return {"type": "vpolytope", "vertices": self.vertices.tolist()}


# ----------------------------------------------------------------------
# combinators


class Product(ConvexBody):
    """Cartesian product of factor bodies (coordinates concatenated in order)."""

    kind = "product"

    def __init__(self, factors):
        if not factors:
            raise BodyValidationError("factors", "need at least one factor")
        self.factors = list(factors)
        dims = [f.dim for f in self.factors]
        offs = np.concatenate([[0], np.cumsum(dims)])
        self._slices = [slice(offs[i], offs[i + 1]) for i in range(len(dims))]
        super().__init__(int(offs[-1]))
        self.is_exact = all(f.is_exact for f in self.factors)

    def contains_batch(self, X):
        X = np.asarray(X, dtype=float)
        ok = np.ones(len(X), dtype=bool)
        for f, sl in zip(self.factors, self._slices):
            ok &= f.contains_batch(X[:, sl])
        return ok

    def _chord_batch(self, P, V):
        m = len(P)
        tm = np.full(m, -np.inf)
        tp = np.full(m, np.inf)
        for f, sl in zip(self.factors, self._slices):
            Vf = V[:, sl]
            live = np.any(Vf != 0.0, axis=1)
            if not np.any(live):
                continue
            a, b = f._chord_batch(P[live][:, sl], Vf[live])
            tm[live] = np.maximum(tm[live], a)
            tp[live] = np.minimum(tp[live], b)
        return tm, tp

    def interior_point(self):
        return np.concatenate([f.interior_point() for f in self.factors])

    def bounding_box(self):
        los, his = zip(*(f.bounding_box() for f in self.factors))
        return np.concatenate(los), np.concatenate(his)

    def support_batch(self, U):
        U = np.asarray(U, dtype=float)
        out = np.zeros(len(U))
        for f, sl in zip(self.factors, self._slices):
            out += f.support_batch(U[:, sl])
        return out

    def distance_to_closure_batch(self, X):
        X = np.asarray(X, dtype=float)
        d2 = np.zeros(len(X))
        for f, sl in zip(self.factors, self._slices):
            d2 += f.distance_to_closure_batch(X[:, sl]) ** 2
        return np.sqrt(d2)

    def to_json(self):
        return {"type": "product", "factors": [f.to_json() for f in self.factors]}


class MinkowskiBall(ConvexBody):
    """Outer parallel body: base + open Euclidean ball of given radius.

    Membership is radius - dist(x, closure(base)) > 0; chords come from a
    bracketed bisection on that test, so they carry certified=False and are
    accurate to CHORD_REL_TOL in the line parameter.
    """

    kind = "minkowski_ball"
    is_exact = False

    def __init__(self, base, radius):
        radius = float(radius)
        if not radius > 0.0:
            raise BodyValidationError("radius", "must be positive")
        try:
            base.distance_to_closure_batch(base.interior_point()[None, :])
        except NotImplementedError as e:
            raise BodyValidationError("base", str(e)) from e
        super().__init__(base.dim)
        self.base = base
        self.radius = radius

    def contains_batch(self, X):
        X = np.asarray(X, dtype=float)
        return self.base.distance_to_closure_batch(X) < self.radius

    def _chord_batch(self, P, V):
        lo_b, hi_b = self.bounding_box()
        speed = np.linalg.norm(V, axis=1)
        # conservative outer bracket: leaving the bounding box certainly leaves
        # the body
        span = np.linalg.norm(hi_b - lo_b)
        t_max = (span + 1.0) / speed
        tp = _bisect_exit(self, P, V, t_max)
        tm = -_bisect_exit(self, P, -V, t_max)
        return tm, tp

    def interior_point(self):
        return self.base.interior_point()

    def bounding_box(self):
        lo, hi = self.base.bounding_box()
        return lo - self.radius, hi + self.radius

    def support_batch(self, U):
        U = np.asarray(U, dtype=float)
        return self.base.support_batch(U) + self.radius * np.linalg.norm(U, axis=1)

    def distance_to_closure_batch(self, X):
        return np.maximum(0.0, self.base.distance_to_closure_batch(X) - self.radius)

    def to_json(self):
        return {"type": "minkowski_ball", "base": self.base.to_json(), "radius": self.radius}


def _bisect_exit(body, P, V, t_max):
    """Largest t with P + t V inside, by bisection on strict membership.

    Assumes P interior and P + t_max V outside.  Converges to CHORD_REL_TOL
    relative accuracy, capped at BISECT_MAX_ITER rounds.
    """
    lo = np.zeros(len(P))
    hi = np.asarray(t_max, dtype=float).copy()
    for _ in range(BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        inside = body.contains_batch(P + mid[:, None] * V)
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
        if np.all(hi - lo <= CHORD_REL_TOL * np.maximum(1.0, hi)):
            break
    return 0.5 * (lo + hi)


def _polygon_distance(verts, X):
    """Distance from points X to a polygon given by ordered vertices."""
    a = verts
    b = np.roll(verts, -1, axis=0)
    w = b - a
    ww = (w * w).sum(axis=1)
    d = X[:, None, :] - a[None, :, :]
    t = np.clip((d * w).sum(axis=2) / ww, 0.0, 1.0)
    proj = a + t[:, :, None] * w
    return np.linalg.norm(X[:, None, :] - proj, axis=2).min(axis=1)


def _dykstra_distance(A, b, row_norms, X, iters=400, tol=1e-12):
    """Distance to {A x <= b} by Dykstra's cyclic projections.

    Exact in the limit; iteration-capped here, which is fine for the
    smoothing radii this backs (the bisection tolerance dominates).
    """
    An = A / row_norms[:, None]
    bn = b / row_norms
    x = X.copy()
    corr = np.zeros((len(A),) + X.shape)
    for _ in range(iters):
        x_prev = x.copy()
        for i in range(len(A)):
            y = x + corr[i]
            viol = np.maximum(0.0, y @ An[i] - bn[i])
            x = y - viol[:, None] * An[i]
            corr[i] = y - x
        if np.max(np.abs(x - x_prev)) <= tol * max(1.0, np.abs(x).max()):
            break
    return np.linalg.norm(X - x, axis=1)


class AffineBody(ConvexBody):
    """Image of a base body under an invertible affine map x -> M x + s.

    Chord parameters are affine invariants, so all oracles delegate exactly
    through the inverse map.
    """

    kind = "affine"

    def __init__(self, base, map_matrix, shift):
        M = np.asarray(map_matrix, dtype=float)
        s = np.asarray(shift, dtype=float).ravel()
        n = base.dim
        if M.shape != (n, n):
            raise BodyValidationError("map", f"must be {n}x{n} to match base body")
        if s.shape != (n,):
            raise BodyValidationError("shift", f"must have length {n}")
        sign, logdet = np.linalg.slogdet(M)
        if sign == 0 or logdet < n * np.log(1e-12):
            raise BodyValidationError("map", "matrix is singular or too close to singular")
        super().__init__(n)
        self.base = base
        self.map = M
        self.shift = s
        self.map_inv = np.linalg.inv(M)
        self.is_exact = base.is_exact

    def _pull_points(self, X):
        return (np.asarray(X, dtype=float) - self.shift) @ self.map_inv.T

    def contains_batch(self, X):
        return self.base.contains_batch(self._pull_points(X))

    def _chord_batch(self, P, V):
        return self.base._chord_batch(self._pull_points(P), V @ self.map_inv.T)

    def interior_point(self):
        return self.map @ self.base.interior_point() + self.shift

    def bounding_box(self):
        lo, hi = self.base.bounding_box()
        c = 0.5 * (lo + hi)
        h = 0.5 * (hi - lo)
        c2 = self.map @ c + self.shift
        h2 = np.abs(self.map) @ h
        return c2 - h2, c2 + h2

    def support_batch(self, U):
        U = np.asarray(U, dtype=float)
        return self.base.support_batch(U @ self.map) + U @ self.shift

    def to_json(self):
        return {
            "type": "affine",
            "map": self.map.tolist(),
            "shift": self.shift.tolist(),
            "base": self.base.to_json(),
        }


# ----------------------------------------------------------------------
# affine images with kind canonicalisation


def affine_image(body, map_matrix, shift=None):
    """Image of a body under x -> M x + s, specialised per kind when exact.

    Balls and ellipsoids map to ellipsoids, polytopes to polytopes; other
    kinds are wrapped in an `AffineBody` that delegates through the inverse
    map.  Either way the construction is exact, not a numerical
    approximation.
    """
    M = np.asarray(map_matrix, dtype=float)
    n = body.dim
    s = np.zeros(n) if shift is None else np.asarray(shift, dtype=float).ravel()
    if M.shape != (n, n):
        raise BodyValidationError("map", f"must be {n}x{n} to match the body")
    if s.shape != (n,):
        raise BodyValidationError("shift", f"must have length {n}")
    sign, _ = np.linalg.slogdet(M)
    if sign == 0:
        raise BodyValidationError("map", "matrix is singular")
    Minv = np.linalg.inv(M)
    if body.kind == "ball":
        return EllipsoidBody(s, Minv.T @ Minv)
    if body.kind == "ellipsoid":
        return EllipsoidBody(M @ body.center + s, Minv.T @ body.shape @ Minv)
    if body.kind == "vpolytope":
        return VPolytope(body.vertices @ M.T + s)
    if body.kind == "hpolytope":
        A2 = body.A @ Minv
        return HPolytope(A2, body.b + A2 @ s)
    if body.kind == "affine":
        return AffineBody(body.base, M @ body.map, M @ body.shift + s)
    return AffineBody(body, M, s)


# ----------------------------------------------------------------------
# serialisation


_REQUIRED_FIELDS = {
    "ball": ("dim",),
    "ellipsoid": ("center", "shape"),
    "hpolytope": ("A", "b"),
    "vpolytope": ("vertices",),
    "product": ("factors",),
    "minkowski_ball": ("base", "radius"),
    "affine": ("map", "shift", "base"),
}


def body_from_json(data):
    """Build a body from its JSON description, validating field by field."""
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, dict):
        raise BodyValidationError("type", "body description must be a JSON object")
    kind = data.get("type")
    if kind not in _REQUIRED_FIELDS:
        raise BodyValidationError("type", f"unknown body type {kind!r}")
    for field in _REQUIRED_FIELDS[kind]:
        if field not in data:
            raise BodyValidationError(field, f"missing for type {kind!r}")
    if kind == "ball":
        dim = data["dim"]
        if not isinstance(dim, int) or dim < 1:
            raise BodyValidationError("dim", "must be a positive integer")
        return Ball(dim)
    if kind == "ellipsoid":
        return EllipsoidBody(data["center"], data["shape"])
    if kind == "hpolytope":
        return HPolytope(data["A"], data["b"])
    if kind == "vpolytope":
        return VPolytope(data["vertices"])
    if kind == "product":
        return Product([body_from_json(f) for f in data["factors"]])
    if kind == "minkowski_ball":
        return MinkowskiBall(body_from_json(data["base"]), data["radius"])
    base = body_from_json(data["base"])
    return AffineBody(base, data["map"], data["shift"])


def load_body(path):
    with open(path) as fh:
        return body_from_json(json.load(fh))
