"""Metric balls, the normalised frame and the local-geometry bound suite."""

import numpy as np
import pytest

from hilbert_lab import gallery
from hilbert_lab.localgeom import (
    LIP_UPPER_BOUND,
    STEP1_GAP_LOWER,
    chord_bound,
    center_chord_bound,
    john_normalize_ball,
    lip_lower_bound,
    metric_ball,
    theorem12_points,
    theorem12_report,
)
from hilbert_lab.metric import hilbert_distance


def test_bound_constants_frozen():
    assert STEP1_GAP_LOWER == pytest.approx(0.009074713, rel=1e-6)
    assert LIP_UPPER_BOUND == pytest.approx(110.1963001, rel=1e-9)
    assert center_chord_bound(2) == pytest.approx(3.0 * np.sqrt(2.0))
    assert chord_bound(2) == pytest.approx(668.2489, rel=1e-6)
    assert chord_bound(3) == pytest.approx(1000.427, rel=1e-6)
    assert lip_lower_bound(2) == pytest.approx(7.48225e-4, rel=1e-5)


def test_metric_ball_disk_is_tanh_circle():
    D = gallery.unit_disk()
    ball = metric_ball(D, [0.0, 0.0], 1.0, resolution=256)
    assert np.allclose(ball.t_ball, np.tanh(1.0), rtol=1e-12)
    pts = ball.boundary_points
    assert np.allclose(np.linalg.norm(pts, axis=1), np.tanh(1.0), rtol=1e-12)
    # boundary points really sit at Hilbert distance 1
    for q in pts[::64]:
        assert hilbert_distance(D, [0.0, 0.0], q) == pytest.approx(1.0, rel=1e-10)


def test_metric_ball_validation():
    D = gallery.unit_disk()
    with pytest.raises(ValueError):
        metric_ball(D, [0.0, 0.0], -1.0)
    with pytest.raises(ValueError):
        metric_ball(D, [2.0, 0.0], 1.0)
    with pytest.raises(ValueError):
        metric_ball(D, [0.0, 0.0], 1.0, resolution=4)


def test_metric_ball_offcentre_square_inside():
    sq = gallery.square()
    ball = metric_ball(sq, [0.4, -0.3], 2.0, resolution=128)
    pts = ball.boundary_points
    assert np.all(sq.contains_batch(pts))
    d = np.array([hilbert_distance(sq, [0.4, -0.3], q) for q in pts[::16]])
    assert np.allclose(d, 2.0, rtol=1e-9)


def test_john_normalize_disk_scaling():
    D = gallery.unit_disk()
    frame = john_normalize_ball(D, p=np.zeros(2))
    scale = 1.0 / np.tanh(1.0)
    assert np.allclose(frame.map, scale * np.eye(2), rtol=1e-3, atol=1e-4)
    assert np.allclose(frame.center, 0.0, atol=1e-3)
    # mapped ball boundary sits on the unit circle
    r = np.linalg.norm(frame.ball_points - frame.center, axis=1)
    assert np.allclose(r, 1.0, rtol=2e-3)


def test_theorem12_disk_centre_values():
    D = gallery.unit_disk()
    rep = theorem12_report(D, np.zeros(2))
    # normalised disk has radius coth(1); the gap to the unit ball boundary
    # is coth(1) - 1, far above the dimension-only lower bound
    assert rep.d0 == pytest.approx(1.0 / np.tanh(1.0) - 1.0, rel=5e-3)
    assert rep.center_chord_max == pytest.approx(1.0 / np.tanh(1.0), rel=5e-3)
    assert rep.passed
    assert rep.diameter_ok
    assert rep.lip_upper < LIP_UPPER_BOUND
    assert rep.lip_lower > lip_lower_bound(2)
    assert rep.equivalence_constant == pytest.approx(max(rep.lip_upper, 1.0 / rep.lip_lower))


def test_theorem12_square_offcentre_passes():
    sq = gallery.square()
    rep = theorem12_report(sq, np.array([0.55, -0.2]))
    assert rep.passed, (rep.d0, rep.chord_max, rep.lip_upper, rep.lip_lower)
    assert rep.d0 >= STEP1_GAP_LOWER
    assert rep.chord_max <= chord_bound(2)


def test_theorem12_cylinder_point_passes():
    cyl = gallery.cylinder()
    rep = theorem12_report(
        cyl, np.array([0.2, 0.1, -0.4]), resolution=512, interior=256, dirs_per_point=32
    )
    assert rep.dim == 3
    assert rep.passed, (rep.d0, rep.chord_max, rep.lip_upper, rep.lip_lower)


def test_theorem12_points_are_interior_and_spread():
    for label, body in gallery.regression_suite().items():
        pts = theorem12_points(body, 5)
        assert len(pts) == 5
        for q in pts:
            assert body.contains(q), label
        spread = max(np.linalg.norm(a - b) for a in pts for b in pts)
        assert spread > 0.1, label
