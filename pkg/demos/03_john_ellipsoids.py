"""
John ellipsoids across the body gallery
=======================================

Every convex body traps a unique maximum-volume inscribed ellipsoid, and
dilating that ellipsoid by sqrt(n) (centrally symmetric bodies) or n
(general bodies) covers the body.  The square and the triangle attain the
two bounds exactly, which makes them sharp test articles: the measured
cover factors below hit sqrt(2) and 2 to many digits.
"""

import numpy as np

from hilbert_lab import john_ellipsoid, john_metric_at, regression_suite, sandwich_check

print(f"{'body':14s} {'cover':>10s} {'bound':>7s}  sym  contained")
for label, body in regression_suite().items():
    rep = sandwich_check(body)
    print(
        f"{label:14s} {rep.cover_factor:10.6f} {rep.bound:7.4f}  "
        f"{'yes' if rep.symmetric else ' no'}  {rep.contained}"
    )

print(f"\nsqrt(2) = {np.sqrt(2):.6f}, so the square is tight; the triangle hits 2.")

# the ellipsoid of the tangent unit ball pins a Riemannian inner product to
# each point — a quadratic shadow of the Finsler structure, off by at most
# the same John factors
from hilbert_lab import square

sq = square()
for p in ([0.0, 0.0], [0.7, 0.0], [0.9, 0.85]):
    g = john_metric_at(sq, p)
    axes = g.ellipsoid.semi_axes()
    print(f"p={p}: metric ellipse semi-axes {axes[0]:.4f}, {axes[1]:.4f}")
