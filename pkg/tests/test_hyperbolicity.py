import numpy as np
import pytest

from hilbert_lab import hyperbolicity as hy
from hilbert_lab.gallery import square, unit_disk
from hilbert_lab.metric import hilbert_distance


class TestGromovProduct:
    def test_symmetry_and_self(self):
        disk = unit_disk()
        x, y, w = [0.3, 0.0], [0.0, 0.3], [-0.1, -0.1]
        assert hy.gromov_product(disk, x, y, w) == pytest.approx(
            hy.gromov_product(disk, y, x, w)
        )
        # (x | x) at w is just the distance to w
        assert hy.gromov_product(disk, x, x, w) == pytest.approx(
            hilbert_distance(disk, x, w)
        )

    def test_bounded_by_distances(self):
        disk = unit_disk()
        x, y, w = [0.5, 0.1], [-0.2, 0.4], [0.0, 0.0]
        gp = hy.gromov_product(disk, x, y, w)
        assert 0.0 <= gp <= min(
            hilbert_distance(disk, x, w), hilbert_distance(disk, y, w)
        )


class TestDeltaProbe:
    def test_disk_defect_plateaus(self):
        # the Klein model is the hyperbolic plane: thin quadruples at every
        # scale, with the empirical defect settling around log 2
        disk = unit_disk()
        e = hy.delta_probe(disk, scales=(1.0, 2.0, 4.0, 8.0), quadruples=4000, seed=0)
        assert e.deltas[-1] < 1.0
        assert 0.3 < e.deltas[-1]
        assert e.deltas[-1] - e.deltas[-2] < 0.1

    def test_square_defect_grows(self):
        # the square's Hilbert geometry contains flats, so the four-point
        # defect keeps pace with the scale instead of saturating
        sq = square()
        e = hy.delta_probe(sq, scales=(1.0, 2.0, 4.0, 8.0), quadruples=4000, seed=0)
        assert e.growth > 1.0
        assert e.deltas[-1] > 1.5

    def test_nested_budgets_monotone(self):
        disk = unit_disk()
        small = hy.delta_probe(disk, scales=(2.0,), quadruples=1000, seed=3)
        large = hy.delta_probe(disk, scales=(2.0,), quadruples=3000, seed=3)
        assert small.deltas[0] <= large.deltas[0]

    def test_deterministic_and_witnessed(self):
        disk = unit_disk()
        a = hy.delta_probe(disk, scales=(1.0, 4.0), quadruples=500, seed=11)
        b = hy.delta_probe(disk, scales=(1.0, 4.0), quadruples=500, seed=11)
        assert np.array_equal(a.deltas, b.deltas)
        assert a.witnesses.shape == (2, 4, 2)
        # witnesses are genuine interior points
        assert all(disk.contains(p) for p in a.witnesses.reshape(-1, 2))

    def test_validations(self):
        disk = unit_disk()
        with pytest.raises(ValueError, match="scales"):
            hy.delta_probe(disk, scales=())
        with pytest.raises(ValueError, match="scales"):
            hy.delta_probe(disk, scales=(1.0, -2.0))
        with pytest.raises(ValueError, match="quadruples"):
            hy.delta_probe(disk, quadruples=0)
        with pytest.raises(ValueError, match="center"):
            hy.delta_probe(disk, center=[2.0, 0.0])
