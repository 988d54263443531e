"""
Metric balls and the Busemann volume density
============================================

Metric balls are star-shaped around their centre and we trace them by
inverting the distance along rays — a closed-form map once the chord
endpoints are known.  The Busemann measure weights Lebesgue volume by
omega_n over the Euclidean volume of the local tangent unit ball, so the
density explodes near the boundary exactly as fast as the balls flatten.
"""

import numpy as np

from hilbert_lab import density_batch, metric_ball, square, unit_disk

disk = unit_disk()

# on the disk the density is the hyperbolic area element (1 - r^2)^(-3/2)
r = np.array([0.0, 0.5, 0.9, 0.95])
pts = np.stack([r, np.zeros_like(r)], axis=1)
vals, errs = density_batch(disk, pts)
print("disk density vs (1-r^2)^(-3/2):")
for ri, v, e in zip(r, vals, errs):
    exact = (1.0 - ri * ri) ** -1.5
    print(f"  r={ri:4.2f}  h={v:10.4f} +- {e:.1e}   exact {exact:10.4f}")

# metric balls in a square: round near the centre, polygonal as the radius
# grows, and squeezed against the boundary from an off-centre point
sq = square()
for center, radius in (([0.0, 0.0], 0.5), ([0.0, 0.0], 2.0), ([0.6, 0.4], 1.5)):
    ball = metric_ball(sq, center, radius, resolution=256)
    pts = ball.boundary_points
    ext = pts.max(axis=0) - pts.min(axis=0)
    print(
        f"ball c={center} R={radius}: bbox {ext[0]:.3f} x {ext[1]:.3f}, "
        f"{len(pts)} boundary points"
    )

# dump the three balls into one SVG for eyeballing
paths = []
for center, radius in (([0.0, 0.0], 0.5), ([0.0, 0.0], 2.0), ([0.6, 0.4], 1.5)):
    pts = metric_ball(sq, center, radius, resolution=256).boundary_points
    d = "M " + " L ".join(f"{x:.4f},{-y:.4f}" for x, y in pts) + " Z"
    paths.append(f'<path d="{d}" fill="none" stroke="#335" stroke-width="0.01"/>')
corners = '<path d="M -1,-1 L 1,-1 L 1,1 L -1,1 Z" fill="none" stroke="#000" stroke-width="0.015"/>'
svg = (
    '<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1.1 -1.1 2.2 2.2">'
    + corners
    + "".join(paths)
    + "</svg>"
)
with open("square_balls.svg", "w") as fh:
    fh.write(svg)
print("\nwrote square_balls.svg")
