import math

import numpy as np
import pytest

from hilbert_lab import spectrum as sp
from hilbert_lab.gallery import equilateral_triangle, square, unit_disk


def tent_oracle(R):
    # closed form on the disk: N = mu(B_R)/R^2, D = 2 mu(B_R)/R^2 - area(unit);
    # both from the hyperbolic ball area 2 pi (cosh R - 1)
    a = (math.cosh(R) - 1.0) / R**2
    return a / (2.0 * a - 1.0)


class TestTrialFunctions:
    def test_tent_profile_and_slope(self):
        t = sp.radial_tent(np.zeros(2), 4.0)
        assert t.profile(np.array([0.0, 2.0, 4.0, 5.0])) == pytest.approx([1.0, 0.5, 0.0, 0.0])
        assert t.slope(np.array([1.0, 4.5]))[0] == pytest.approx(-0.25)
        assert t.slope(np.array([1.0, 4.5]))[1] == 0.0

    def test_exponential_truncates_hard(self):
        t = sp.radial_exponential(np.zeros(2), 3.0, 0.5)
        vals = t.profile(np.array([0.0, 2.0, 2.999, 3.0, 4.0]))
        assert vals[0] == 1.0
        assert vals[1] == pytest.approx(math.exp(-1.0))
        assert vals[2] > 0.2
        assert vals[3] == 0.0 and vals[4] == 0.0

    def test_evaluate_vanishes_outside_support(self):
        disk = unit_disk()
        t = sp.radial_tent(np.zeros(2), 1.0)
        far = np.array([[math.tanh(2.0), 0.0]])  # Hilbert distance 2 from center
        assert t.evaluate(disk, far)[0] == 0.0
        assert np.all(t.gradient(disk, far) == 0.0)

    def test_parameter_validation(self):
        with pytest.raises(ValueError, match="radius"):
            sp.radial_tent(np.zeros(2), 0.0)
        with pytest.raises(ValueError, match="rate"):
            sp.radial_exponential(np.zeros(2), 1.0, -1.0)


class TestRayleigh:
    def test_tent_on_disk_matches_closed_form(self):
        # oracle 0.549256 at R = 6 from the hyperbolic area element
        disk = unit_disk()
        q = sp.rayleigh_quotient(disk, sp.radial_tent(np.zeros(2), 6.0), samples=2**13, seed=1)
        assert q.stderr < 0.01
        assert q.quotient == pytest.approx(tent_oracle(6.0), abs=5.0 * q.stderr + 2e-3)

    def test_square_tent_trend_vanishing_bottom(self):
        # the square's geometry is bi-lipschitz to a normed plane, so tents
        # over growing balls push the quotient to zero roughly like 1/R^2 —
        # in contrast with the disk, where every quotient stays above 1/4
        sq = square()
        qs = [
            sp.rayleigh_quotient(sq, sp.radial_tent(np.zeros(2), R), samples=2**13, seed=4).quotient
            for R in (6.0, 12.0)
        ]
        assert qs[1] < qs[0]
        assert qs[1] < 0.05

    def test_exponential_quotient_is_rate_squared(self):
        # with the jump uncharged the ratio is rate^2 pointwise, so the
        # estimate hits it to gradient accuracy on any body at any radius
        disk = unit_disk()
        q = sp.rayleigh_quotient(
            disk, sp.radial_exponential(np.zeros(2), 8.0, 0.5), samples=2**12, seed=3
        )
        assert q.quotient == pytest.approx(0.25, abs=max(5.0 * q.stderr, 1e-3))

    def test_rate_squared_invariant_on_triangle(self):
        tri = equilateral_triangle()
        q = sp.rayleigh_quotient(
            tri, sp.radial_exponential(np.zeros(2), 4.0, 0.8), samples=2**11, seed=9
        )
        assert q.quotient == pytest.approx(0.64, abs=max(5.0 * q.stderr, 5e-3))

    def test_estimate_fields(self):
        disk = unit_disk()
        q = sp.rayleigh_quotient(disk, sp.radial_tent(np.zeros(2), 2.0), samples=2**10, seed=0)
        assert q.samples == 2**10 and q.seed == 0
        assert q.quotient == pytest.approx(q.numerator / q.denominator)
        assert q.stderr > 0


class TestSobolev:
    def test_tent_on_disk_matches_closed_form(self):
        # numerator mu(B_R)/R, denominator (2 pi / R)(sinh R - R):
        # ratio (cosh R - 1)/(sinh R - R) = 1.025560 at R = 6
        disk = unit_disk()
        s = sp.sobolev_quotient(disk, sp.radial_tent(np.zeros(2), 6.0), samples=2**13, seed=5)
        oracle = (math.cosh(6.0) - 1.0) / (math.sinh(6.0) - 6.0)
        assert s.quotient == pytest.approx(oracle, abs=5.0 * s.stderr + 2e-3)


class TestMinimize:
    def test_exponential_family_floor(self):
        disk = unit_disk()
        res = sp.minimize_rayleigh(
            disk, np.zeros(2), 8.0, family="exponential", budget=6, samples=2**12, seed=2
        )
        # quotient grows like rate^2, so the grid floor 1/2 wins and the
        # refinement cannot improve past 1/4
        assert res.estimate.quotient == pytest.approx(0.25, abs=0.01)
        assert res.evaluations == 6
        assert len(res.history) == 6
        best = min(e.quotient for _, e in res.history)
        assert res.estimate.quotient == best

    def test_tent_family_single_evaluation(self):
        disk = unit_disk()
        res = sp.minimize_rayleigh(disk, np.zeros(2), 6.0, family="tent", samples=2**12, seed=4)
        assert res.evaluations == 1
        assert res.estimate.quotient == pytest.approx(tent_oracle(6.0), abs=0.02)

    def test_validations(self):
        disk = unit_disk()
        with pytest.raises(ValueError, match="family"):
            sp.minimize_rayleigh(disk, np.zeros(2), 2.0, family="bessel")
        with pytest.raises(ValueError, match="budget"):
            sp.minimize_rayleigh(disk, np.zeros(2), 2.0, budget=0)
        with pytest.raises(ValueError, match="rates"):
            sp.minimize_rayleigh(disk, np.zeros(2), 2.0, rates=(0.5, -1.0))


class TestCheeger:
    def test_disk_ball_matches_coth(self):
        # boundary/volume of the hyperbolic R-ball: sinh R/(cosh R - 1) = coth(R/2)
        disk = unit_disk()
        c = sp.cheeger_quotient(disk, np.zeros(2), 2.0, eps=0.1, samples=2**13, seed=7)
        assert c.quotient == pytest.approx(1.0 / math.tanh(1.0), abs=0.006)
        assert c.stderr < 0.004
        assert c.volume == pytest.approx(2.0 * math.pi * (math.cosh(2.0) - 1.0), rel=0.01)
        assert c.boundary == pytest.approx(2.0 * math.pi * math.sinh(2.0), rel=0.01)

    def test_quotient_decreases_with_radius(self):
        disk = unit_disk()
        c1 = sp.cheeger_quotient(disk, np.zeros(2), 1.0, eps=0.1, samples=2**12, seed=0)
        c2 = sp.cheeger_quotient(disk, np.zeros(2), 3.0, eps=0.1, samples=2**12, seed=0)
        assert c1.quotient == pytest.approx(1.0 / math.tanh(0.5), abs=0.02)
        assert c2.quotient == pytest.approx(1.0 / math.tanh(1.5), abs=0.02)
        assert c1.quotient > c2.quotient

    def test_validations(self):
        disk = unit_disk()
        with pytest.raises(ValueError, match="radius"):
            sp.cheeger_quotient(disk, np.zeros(2), -1.0)
        with pytest.raises(ValueError, match="eps"):
            sp.cheeger_quotient(disk, np.zeros(2), 1.0, eps=0.0)


class TestCylinder:
    def test_fact1_vertical_norm_exact(self):
        r = sp.fact1_check()
        assert r.max_defect < 1e-12

    def test_fact2_flat_cap(self):
        r = sp.fact2_check(l1=1.0, l2=0.5)
        assert r.cap_height == pytest.approx(2.0 / 3.0)
        assert r.max_defect < 1e-12
        r2 = sp.fact2_check(l1=2.0, l2=2.0, width=12.0)
        assert r2.cap_height == pytest.approx(2.0)
        assert r2.max_defect < 1e-12

    def test_fact2_rejects_steep_tilts(self):
        with pytest.raises(ValueError, match="tilt"):
            sp.fact2_check(l1=1.0, l2=1.0, width=2.0, tilts=np.array([0.0, 1.2]))

    def test_sandwich_bounds_and_alpha_necessity(self):
        rep = sp.cylinder_sandwich(
            heights=np.array([-0.8, 0.0, 0.8]),
            base_points=np.array([[0.0, 0.0], [0.4, 0.0]]),
            samples=2**12,
            seed=0,
        )
        assert rep.within_bounds
        assert rep.ratios.shape == (3, 2)
        # centered cell is exact: the tangent ball at the origin is the
        # product disk x (-1, 1), volume 2 pi, against alpha vol2 = pi
        assert rep.ratios[1, 0] == pytest.approx(2.0, abs=0.1)
        # near the caps the unweighted ratio drops below the lower constant
        assert rep.alpha_necessary
        assert rep.plain_ratios[0, 0] < rep.lower
        assert rep.spectral_constant == pytest.approx(1.0 / 48.0)

    def test_sandwich_validations(self):
        with pytest.raises(ValueError, match="heights"):
            sp.cylinder_sandwich(heights=np.array([0.0, 1.0]))
        with pytest.raises(ValueError, match="base_points"):
            sp.cylinder_sandwich(base_points=np.array([[1.2, 0.0]]))

    def test_spectral_constant_assembly(self):
        assert sp.SANDWICH_LOWER == pytest.approx(2.0 / 3.0)
        assert sp.SANDWICH_UPPER == 8.0
        assert sp.SPECTRAL_LOWER_BOUND == pytest.approx(1.0 / 48.0)
