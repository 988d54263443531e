"""Named example bodies used across tests, demos and regression suites."""

from __future__ import annotations

import numpy as np

from .bodies import (
    AffineBody,
    Ball,
    EllipsoidBody,
    HPolytope,
    MinkowskiBall,
    Product,
    VPolytope,
)


def unit_ball(dim=2):
    return Ball(dim)


def unit_disk():
    return Ball(2)


def square(half=1.0):
    A = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    return HPolytope(A, np.full(4, half))


def cube(half=1.0, dim=3):
    A = np.vstack([np.eye(dim), -np.eye(dim)])
    return HPolytope(A, np.full(2 * dim, half))


def interval(lo=-1.0, hi=1.0):
    return HPolytope([[1.0], [-1.0]], [hi, -lo])


def equilateral_triangle(circumradius=1.0):
    th = np.pi / 2 + 2.0 * np.pi * np.arange(3) / 3
    verts = circumradius * np.column_stack([np.cos(th), np.sin(th)])
    return VPolytope(verts)


def regular_polygon(sides, circumradius=1.0):
    th = 2.0 * np.pi * np.arange(sides) / sides
    return VPolytope(circumradius * np.column_stack([np.cos(th), np.sin(th)]))


def ellipse(a=2.0, b=1.0, center=(0.0, 0.0)):
    return EllipsoidBody(center, np.diag([1.0 / a**2, 1.0 / b**2]))


def needle(aspect=20.0):
    """Long thin ellipse; a stress case for near-degenerate chords."""
    return ellipse(a=aspect, b=1.0)


def cylinder():
    """Unit disk times (-1, 1), the standard product example in dimension 3."""
    return Product([Ball(2), Ball(1)])


def slab_product(l1=1.0, l2=1.0, width=10.0):
    """Wide disk times (-l2, l1); flat caps dominate the tangent geometry."""
    disk = EllipsoidBody([0.0, 0.0], np.diag([1.0 / width**2, 1.0 / width**2]))
    return Product([disk, interval(-l2, l1)])


def rounded_square(half=1.0, radius=0.25):
    return MinkowskiBall(square(half), radius)


def rounded_triangle(circumradius=1.0, radius=0.2):
    return MinkowskiBall(equilateral_triangle(circumradius), radius)


def sheared_disk(shear=0.5):
    M = np.array([[1.0, shear], [0.0, 1.0]])
    return AffineBody(Ball(2), M, np.zeros(2))


def random_polygon(sides=12, seed=7, circumradius=1.0):
    rng = np.random.default_rng(seed)
    th = np.sort(rng.uniform(0.0, 2.0 * np.pi, sides))
    r = circumradius * rng.uniform(0.6, 1.0, sides)
    return VPolytope(np.column_stack([r * np.cos(th), r * np.sin(th)]))


def simplex3():
    verts = np.array(
        [
            [1.0, 1.0, 1.0],
            [1.0, -1.0, -1.0],
            [-1.0, 1.0, -1.0],
            [-1.0, -1.0, 1.0],
        ]
    )
    return VPolytope(verts)


def regression_suite():
    """Eight bodies spanning every oracle path, keyed by a short label.

    Mixes smooth and polyhedral boundaries, dimensions 2 and 3, an affine
    image and an outer parallel body, so metric routines get exercised on
    each chord code path.
    """
    return {
        "disk": unit_disk(),
        "ellipse": ellipse(2.0, 1.0),
        "square": square(),
        "triangle": equilateral_triangle(),
        "polygon": random_polygon(),
        "sheared-disk": sheared_disk(),
        "rounded-square": rounded_square(),
        "cylinder": cylinder(),
    }
