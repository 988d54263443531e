"""Hilbert distance, Finsler norm and dual norm of a bounded convex body.

For p, q in the body and a, b the two boundary exits of the chord through
them (a on the p side), the distance is half the log of the cross ratio
[a, p, q, b].  Everything here is phrased in chord line parameters: if the
chord through x in direction v leaves the body at parameters t_minus < 0 <
t_plus, then with A = -t_minus and B = t_plus

    d(x, x + t v) = (1/2) log( ((A + t)/A) * (B/(B - t)) ),   0 <= t < B,

the Finsler norm of v at x is (1/2) (1/B + 1/A), and the map t(rho)
inverting the distance along the ray has the closed form used by
`ray_point_param`.  Line parameters are affine invariants, so all of this is
exact for every body kind whose chords are exact.
"""

from __future__ import annotations

import numpy as np

from .bodies import NotInteriorError
from .directions import sphere_nested

COLLINEARITY_TOL = 1e-9


def cross_ratio(a, p, q, b, collinearity_tol=COLLINEARITY_TOL):
    """Cross ratio [a, p, q, b] = (|q-a| |p-b|) / (|p-a| |q-b|).

    The four points must be collinear within `collinearity_tol` (relative to
    the span |b-a|) and ordered a, p, q, b along the line.  p = q is allowed
    and gives 1; p = a or q = b make the ratio undefined and raise.
    """
    a, p, q, b = (np.asarray(x, dtype=float) for x in (a, p, q, b))
    u = b - a
    span = np.linalg.norm(u)
    if span == 0.0:
        raise ValueError("a and b coincide; the cross ratio is undefined")
    u = u / span
    tol = collinearity_tol * span
    for name, x in (("p", p), ("q", q)):
        off = (x - a) - np.dot(x - a, u) * u
        if np.linalg.norm(off) > tol:
            raise ValueError(f"{name} is not on the line through a and b (offset {np.linalg.norm(off):.3g})")
    sp = np.dot(p - a, u)
    sq = np.dot(q - a, u)
    if not (-tol <= sp <= sq + tol and sq <= span + tol):
        raise ValueError("points must be ordered a, p, q, b along the line")
    pa = np.linalg.norm(p - a)
    qb = np.linalg.norm(q - b)
    if pa == 0.0 or qb == 0.0:
        raise ValueError("p = a or q = b; the cross ratio is undefined")
    return float((np.linalg.norm(q - a) * np.linalg.norm(p - b)) / (pa * qb))


def hilbert_distance(body, p, q):
    """Hilbert distance between interior points p and q."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return float(hilbert_distance_pairs(body, p[None, :], q[None, :])[0])


def hilbert_distance_pairs(body, P, Q):
    """Row-wise Hilbert distances between P[i] and Q[i]."""
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    V = Q - P
    live = np.any(V != 0.0, axis=1)
    out = np.zeros(len(P))
    if not np.any(live):
        return out
    if not np.all(body.contains_batch(P[live])):
        raise NotInteriorError("p: base point is not interior to the body")
    tm, tp = body.chord_batch(P[live], V[live])
    if np.any(tp <= 1.0):
        raise NotInteriorError("q: point is outside the body or on its boundary")
    # d = (1/2) log( ((1 - tm) / -tm) * (tp / (tp - 1)) ), with log1p for the
    # two factors so accuracy survives both tiny and huge distances
    out[live] = 0.5 * (np.log1p(1.0 / (tp - 1.0)) + np.log1p(-1.0 / tm))
    return out


def finsler_norm(body, p, u):
    """Finsler norm of tangent vector u at interior point p."""
    p = np.asarray(p, dtype=float)
    u = np.asarray(u, dtype=float)
    if not np.any(u):
        return 0.0
    ch = body.chord(p, u)
    return 0.5 * (1.0 / ch.t_plus - 1.0 / ch.t_minus)


def finsler_norm_batch(body, P, U):
    """Row-wise Finsler norms; zero vectors get norm 0."""
    P = np.asarray(P, dtype=float)
    U = np.asarray(U, dtype=float)
    out = np.zeros(len(P))
    live = np.any(U != 0.0, axis=1)
    if np.any(live):
        tm, tp = body.chord_batch(P[live], U[live])
        out[live] = 0.5 * (1.0 / tp - 1.0 / tm)
    return out


# ----------------------------------------------------------------------
# dual norm


_INV_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def _golden_max(fun, lo, hi, iters):
    """Lockstep golden-section maximisation of fun over [lo, hi] row-wise.

    fun maps an array of parameters to an array of values.  Returns the best
    parameter and value seen, including the endpoints of the initial bracket.
    """
    lo = np.asarray(lo, dtype=float).copy()
    hi = np.asarray(hi, dtype=float).copy()
    best_t = lo.copy()
    best_v = fun(lo)
    for t, v in ((hi, fun(hi)),):
        better = v > best_v
        best_t = np.where(better, t, best_t)
        best_v = np.maximum(best_v, v)
    c = hi - _INV_GOLDEN * (hi - lo)
    d = lo + _INV_GOLDEN * (hi - lo)
    fc = fun(c)
    fd = fun(d)
    for _ in range(iters):
        pick_c = fc >= fd
        hi = np.where(pick_c, d, hi)
        lo = np.where(pick_c, lo, c)
        better = np.where(pick_c, fc, fd)
        arg = np.where(pick_c, c, d)
        improve = better > best_v
        best_t = np.where(improve, arg, best_t)
        best_v = np.maximum(best_v, better)
        c = hi - _INV_GOLDEN * (hi - lo)
        d = lo + _INV_GOLDEN * (hi - lo)
        fc = fun(c)
        fd = fun(d)
    return best_t, best_v


def dual_norm(body, p, ell, directions=64):
    """Dual Finsler norm sup { <ell, u> : F(p, u) = 1 } at interior p.

    Scans `directions` nested sphere directions (at least 8) and refines the
    best candidate by golden-section search, in the plane on the bracketing
    arc, in higher dimension by great-circle coordinate sweeps.  The result
    is the max over all evaluated directions, so a larger budget never loses
    to a smaller one beyond refinement rounding.
    """
    p = np.asarray(p, dtype=float)
    ell = np.asarray(ell, dtype=float)
    return float(dual_norm_batch(body, p[None, :], ell[None, :], directions=directions)[0])


def dual_norm_batch(body, P, L, directions=64, sweeps=2, iters=48):
    P = np.asarray(P, dtype=float)
    L = np.asarray(L, dtype=float)
    if directions < 8:
        raise ValueError("directions: need at least 8 sampling directions")
    m, n = P.shape
    out = np.zeros(m)
    live = np.any(L != 0.0, axis=1)
    if not np.any(live):
        return out
    Pl = P[live]
    Ll = L[live]
    ml = len(Pl)
    dirs = sphere_nested(n, directions)
    k = len(dirs)

    P_rep = np.repeat(Pl, k, axis=0)
    V_tile = np.tile(dirs, (ml, 1))
    tm, tp = body.chord_batch(P_rep, V_tile)
    F = (0.5 * (1.0 / tp - 1.0 / tm)).reshape(ml, k)
    G = (Ll @ dirs.T) / F
    best_idx = np.argmax(G, axis=1)
    best_val = G[np.arange(ml), best_idx]

    if n == 2:
        th = np.arctan2(dirs[:, 1], dirs[:, 0])
        order = np.argsort(th)
        sorted_th = th[order]
        rank = np.empty(k, dtype=int)
        rank[order] = np.arange(k)
        r = rank[best_idx]
        left = sorted_th[(r - 1) % k]
        mid = sorted_th[r]
        right = sorted_th[(r + 1) % k]
        # unwrap so left < mid < right
        left = np.where(left > mid, left - 2.0 * np.pi, left)
        right = np.where(right < mid, right + 2.0 * np.pi, right)

        def g_of_theta(theta):
            V = np.column_stack([np.cos(theta), np.sin(theta)])
            a, b = body.chord_batch(Pl, V)
            return np.einsum("ij,ij->i", Ll, V) / (0.5 * (1.0 / b - 1.0 / a))

        _, v1 = _golden_max(g_of_theta, left, right, iters)
        best_val = np.maximum(best_val, v1)
    else:
        best_dir = dirs[best_idx]
        for _ in range(sweeps):
            basis = _complement_basis(best_dir)
            for j in range(n - 1):
                w = basis[:, :, j]

                def g_of_phi(phi, u0=best_dir, w=w):
                    V = np.cos(phi)[:, None] * u0 + np.sin(phi)[:, None] * w
                    a, b = body.chord_batch(Pl, V)
                    return np.einsum("ij,ij->i", Ll, V) / (0.5 * (1.0 / b - 1.0 / a))

                phi_star, v1 = _golden_max(
                    g_of_phi, np.full(ml, -0.5 * np.pi), np.full(ml, 0.5 * np.pi), iters
                )
                upd = v1 > best_val
                new_dir = np.cos(phi_star)[:, None] * best_dir + np.sin(phi_star)[:, None] * w
                new_dir /= np.linalg.norm(new_dir, axis=1, keepdims=True)
                best_dir = np.where(upd[:, None], new_dir, best_dir)
                best_val = np.maximum(best_val, v1)
    out[live] = best_val
    return out


def _complement_basis(U):
    """Orthonormal complements of unit rows of U, shape (m, n, n-1).

    Householder reflection sending e_0 to the row; columns 1..n-1 of the
    reflector are then an orthonormal basis of the complement.
    """
    m, n = U.shape
    V = U.copy()
    V[:, 0] -= 1.0
    nrm2 = np.einsum("ij,ij->i", V, V)
    safe = nrm2 > 1e-20
    coef = np.zeros(m)
    coef[safe] = 2.0 / nrm2[safe]
    # out[i, :, j] = e_{j+1} - coef_i * v_{j+1} * v
    out = np.broadcast_to(np.eye(n)[:, 1:], (m, n, n - 1)).copy()
    out -= (coef[:, None] * V[:, 1:])[:, None, :] * V[:, :, None]
    # rows with U ~ e_0 keep the identity complement
    return out


def geodesic_additivity_check(body, p, q, r):
    """|d(p,q) + d(q,r) - d(p,r)| for q on the segment from p to r.

    Straight chords are geodesics, so the defect is pure numerical error;
    callers use it as an end-to-end accuracy probe.  Raises if q is not on
    the segment within the collinearity tolerance.
    """
    p, q, r = (np.asarray(x, dtype=float) for x in (p, q, r))
    u = r - p
    span = np.linalg.norm(u)
    if span == 0.0:
        raise ValueError("p and r coincide")
    u = u / span
    off = (q - p) - np.dot(q - p, u) * u
    if np.linalg.norm(off) > COLLINEARITY_TOL * span:
        raise ValueError("q is not on the line through p and r")
    s = np.dot(q - p, u)
    if not (-COLLINEARITY_TOL * span <= s <= span * (1.0 + COLLINEARITY_TOL)):
        raise ValueError("q must lie between p and r")
    return abs(
        hilbert_distance(body, p, q)
        + hilbert_distance(body, q, r)
        - hilbert_distance(body, p, r)
    )


# ----------------------------------------------------------------------
# closed-form radial map along chords


def ray_point_param(tm, tp, rho):
    """Euclidean line parameter at Hilbert distance rho along a ray.

    Given chord parameters (tm, tp) of the ray's line through the base point
    (tm < 0 < tp) and rho >= 0, returns t with d(base, base + t v) = rho.
    Inverts the along-chord distance in closed form:

        t = A B (E - 1) / (B + E A),   A = -tm, B = tp, E = exp(2 rho).

    Broadcasts over arrays.
    """
    A = -np.asarray(tm, dtype=float)
    B = np.asarray(tp, dtype=float)
    E = np.exp(2.0 * np.asarray(rho, dtype=float))
    return A * B * (E - 1.0) / (B + E * A)


def ray_param_slope(tm, tp, rho):
    """Derivative dt/drho of `ray_point_param` (the polar volume factor)."""
    A = -np.asarray(tm, dtype=float)
    B = np.asarray(tp, dtype=float)
    E = np.exp(2.0 * np.asarray(rho, dtype=float))
    return 2.0 * E * A * B * (A + B) / (B + E * A) ** 2


def _fd_directional(body, C, X, D, delta):
    """Central difference quotients of d(c, .) along unit directions D.

    The Euclidean step is delta over the directional Finsler norm, so each
    probe moves about delta in Hilbert distance and stays interior even
    within machine distance of the boundary.
    """
    tm, tp = body.chord_batch(X, D)
    F = 0.5 * (1.0 / tp - 1.0 / tm)
    h = delta / F
    fwd = hilbert_distance_pairs(body, C, X + h[:, None] * D)
    bwd = hilbert_distance_pairs(body, C, X - h[:, None] * D)
    return (fwd - bwd) / (2.0 * h)


def hilbert_gradient(body, center, X, delta=1e-3):
    """Gradient rows of rho(x) = d(center, x) by metric-scaled differences.

    Two passes.  The first differences along the coordinate axes.  Near the
    boundary the tangent unit ball is extremely eccentric, and the axis
    frame mixes its cheap and expensive directions: distance rounding noise
    picked up along an expensive axis leaks into the cheap components of the
    gradient, and the dual norm then amplifies it by the aspect of the ball.
    The second pass re-differences in the orthonormal frame led by the
    first-pass direction, so the error of each component scales with the
    Finsler norm of its own direction — exactly the weight the dual norm
    divides by.  Accuracy is about delta**2 relative plus rounding.
    """
    X = np.asarray(X, dtype=float)
    center = np.asarray(center, dtype=float)
    m, n = X.shape
    grad = np.empty((m, n))
    C = np.tile(center, (m, 1))
    for j in range(n):
        E = np.zeros((m, n))
        E[:, j] = 1.0
        grad[:, j] = _fd_directional(body, C, X, E, delta)
    nrm = np.linalg.norm(grad, axis=1)
    live = nrm > 0.0
    if not np.any(live):
        return grad
    V = grad[live] / nrm[live, None]
    frame = np.concatenate([V[:, :, None], _complement_basis(V)], axis=2)
    Xl, Cl = X[live], C[live]
    out = np.zeros_like(Xl)
    for k in range(n):
        D = frame[:, :, k]
        out += _fd_directional(body, Cl, Xl, D, delta)[:, None] * D
    grad[live] = out
    return grad
