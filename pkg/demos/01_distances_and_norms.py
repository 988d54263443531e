"""
Hilbert distances and Finsler norms on convex bodies
====================================================

The Hilbert distance between two interior points is half the log of the
cross ratio their chord cuts on the boundary.  On the unit disk this is
exactly the Klein model of the hyperbolic plane, which gives us closed
forms to check against; on a square or any other convex body the same
construction yields a different, genuinely Finsler geometry.
"""

import numpy as np

from hilbert_lab import (
    Ball,
    affine_image,
    dual_norm_batch,
    finsler_norm_batch,
    hilbert_distance,
    square,
    unit_disk,
)

disk = unit_disk()

# distance from the centre to a point at Klein radius r is atanh(r)
for r in (0.2, 0.5, 0.761594, 0.95):
    d = hilbert_distance(disk, [0.0, 0.0], [r, 0.0])
    print(f"disk: d(0, {r:.6f}) = {d:.6f}   atanh = {np.arctanh(r):.6f}")

# straight chords are geodesics: distances add along a segment
x, y = np.array([-0.3, 0.4]), np.array([0.6, -0.1])
m = x + 0.37 * (y - x)
lhs = hilbert_distance(disk, x, m) + hilbert_distance(disk, m, y)
print(f"\nadditivity on a chord: {lhs:.12f} vs {hilbert_distance(disk, x, y):.12f}")

# the construction is projectively natural: an invertible linear map of the
# body maps distances without change
A = np.array([[1.0, 0.7], [0.0, 1.4]])
sheared = affine_image(disk, A)
d0 = hilbert_distance(disk, x, y)
d1 = hilbert_distance(sheared, A @ x, A @ y)
print(f"affine invariance:     {d0:.12f} vs {d1:.12f}")

# --- the infinitesimal picture -------------------------------------------
# At a point p the metric has a norm on tangent vectors: half the sum of the
# reciprocal distances to the boundary along the vector's line.  Near the
# boundary the norm blows up like 1/(2 gap) in the outward direction while
# staying moderate sideways, so the unit balls become long thin slivers.

sq = square()
p = np.array([0.9, 0.0])
dirs = np.array([[1.0, 0.0], [0.0, 1.0], [0.7, 0.7]])
dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
F = finsler_norm_batch(sq, np.tile(p, (3, 1)), dirs)
print(f"\nsquare at p = {p}:")
for v, f in zip(dirs, F):
    print(f"  F(p, [{v[0]:+.3f},{v[1]:+.3f}]) = {f:10.4f}")

# the dual norm measures covectors against that unit ball; for the gradient
# of the distance function it always equals one (the eikonal property)
from hilbert_lab import hilbert_gradient

X = np.array([[0.5, 0.2], [0.9, -0.3], [0.97, 0.1]])
G = hilbert_gradient(sq, np.zeros(2), X)
dn = dual_norm_batch(sq, X, G)
print("\ndual norm of grad d(0, .):", np.array2string(dn, precision=6))
