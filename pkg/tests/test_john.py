"""Inscribed ellipsoids: exact cases, solver cases, certified oracle cases."""

import numpy as np
import pytest

from hilbert_lab import gallery
from hilbert_lab.bodies import AffineBody, Ball, affine_image
from hilbert_lab.john import (
    Ellipsoid,
    john_ellipsoid,
    john_metric_at,
    sandwich_check,
)
from hilbert_lab.metric import finsler_norm
from hilbert_lab.directions import sphere_nested


def test_john_of_ball_and_ellipsoid_exact():
    E = john_ellipsoid(Ball(2))
    assert np.allclose(E.center, 0.0)
    assert np.allclose(E.shape, np.eye(2))
    body = gallery.ellipse(2.0, 1.0)
    E = john_ellipsoid(body)
    assert np.allclose(E.center, body.center)
    assert np.allclose(E.shape, body.shape)
    assert E.volume() == pytest.approx(2.0 * np.pi, rel=1e-12)


def test_john_of_square_is_unit_disk():
    E = john_ellipsoid(gallery.square())
    assert np.allclose(E.center, 0.0, atol=1e-6)
    assert np.allclose(E.shape, np.eye(2), atol=1e-5)
    assert E.volume() == pytest.approx(np.pi, rel=1e-6)


def test_john_of_triangle_is_incircle():
    E = john_ellipsoid(gallery.equilateral_triangle())
    assert np.allclose(E.center, 0.0, atol=1e-6)
    assert E.semi_axes() == pytest.approx([0.5, 0.5], rel=1e-5)


def test_john_affine_equivariance_through_solver():
    # solving the mapped polytope must agree with mapping the solution
    sq = gallery.square()
    M = np.array([[1.3, 0.4], [-0.2, 0.9]])
    s = np.array([0.2, -0.1])
    E1 = john_ellipsoid(affine_image(sq, M, s))
    E0 = john_ellipsoid(sq)
    Minv = np.linalg.inv(M)
    expected_shape = Minv.T @ E0.shape @ Minv
    assert np.allclose(E1.center, M @ E0.center + s, atol=1e-6)
    assert np.allclose(E1.shape, expected_shape, rtol=1e-4, atol=1e-6)


def test_john_affine_dispatch_exact():
    M = np.array([[2.0, 1.0], [0.0, 1.0]])
    s = np.array([0.5, 0.5])
    wrapped = AffineBody(Ball(2), M, s)
    E = john_ellipsoid(wrapped)
    Minv = np.linalg.inv(M)
    assert np.allclose(E.center, s)
    assert np.allclose(E.shape, Minv.T @ Minv, rtol=1e-12)


def test_john_of_cylinder_is_unit_ball():
    E = john_ellipsoid(gallery.cylinder())
    assert np.allclose(E.center, 0.0, atol=5e-3)
    axes = E.semi_axes()
    assert np.all(axes > 0.98) and np.all(axes <= 1.0 + 1e-9)


def test_john_of_rounded_square_is_big_disk():
    E = john_ellipsoid(gallery.rounded_square(half=1.0, radius=0.25))
    assert np.allclose(E.center, 0.0, atol=1e-3)
    assert E.semi_axes() == pytest.approx([1.25, 1.25], rel=2e-3)


def test_sandwich_on_suite():
    for label, body in gallery.regression_suite().items():
        rep = sandwich_check(body, probes=4000)
        assert rep.contained, label
        assert rep.bound_satisfied, (label, rep.cover_factor, rep.bound)
        assert rep.cover_factor >= 1.0 - 1e-9, label


def test_sandwich_cover_values():
    rep = sandwich_check(gallery.unit_disk())
    assert rep.cover_factor == pytest.approx(1.0, abs=1e-9)
    assert rep.symmetric
    rep = sandwich_check(gallery.equilateral_triangle())
    assert not rep.symmetric
    assert rep.bound == 2.0
    assert rep.cover_factor == pytest.approx(2.0, abs=2e-3)
    rep = sandwich_check(gallery.square())
    assert rep.symmetric
    assert rep.bound == pytest.approx(np.sqrt(2.0))
    assert rep.cover_factor == pytest.approx(np.sqrt(2.0), abs=2e-3)


def test_john_metric_disk_offcentre():
    D = gallery.unit_disk()
    jm = john_metric_at(D, [0.5, 0.0], resolution=512)
    expected = np.diag([16.0 / 9.0, 4.0 / 3.0])
    assert np.allclose(jm.inner, expected, rtol=2e-3, atol=2e-3)
    assert jm.norm([1.0, 0.0]) == pytest.approx(4.0 / 3.0, rel=2e-3)


def test_john_metric_norm_sandwich():
    # (1/sqrt(n)) g-norm <= F <= g-norm, tight for the square at a corner
    # direction; probed over the suite at two points each
    for label, body in gallery.regression_suite().items():
        p = body.interior_point()
        lo, hi = body.bounding_box()
        q = p + 0.15 * (hi - lo) * np.linspace(-0.3, 0.3, body.dim)
        pts = [p] if not body.contains(q) else [p, q]
        for x in pts:
            jm = john_metric_at(body, x, resolution=512 if body.dim == 2 else 1024)
            for v in sphere_nested(body.dim, 32):
                F = finsler_norm(body, x, v)
                g = jm.norm(v)
                assert F <= g * (1.0 + 1e-6) + 1e-9, (label, v)
                assert F >= g / np.sqrt(body.dim) * (1.0 - 1e-6) - 1e-9, (label, v)


def test_ellipsoid_helpers():
    E = Ellipsoid(np.zeros(2), np.diag([4.0, 1.0]))
    assert E.semi_axes() == pytest.approx([0.5, 1.0])
    assert E.radial([[1.0, 0.0]])[0] == pytest.approx(0.5)
    assert E.contains([0.3, 0.0]) and not E.contains([0.6, 0.0])
    sc = E.scaled(0.5)
    assert sc.semi_axes() == pytest.approx([0.25, 0.5])
