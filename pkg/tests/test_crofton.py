"""
Unit tests for the Cauchy-Crofton estimators.
"""

import pytest

from lkgeom.adapter.error.error import DomainError, ValidationError
from lkgeom.model.plset import PLSet
from lkgeom.model.polytope import box, point, segment
from lkgeom.service.crofton import crofton_volume_mc, lk_via_slices_mc
from tests.helpers import within


@pytest.mark.unit
@pytest.mark.montecarlo
class TestCroftonVolume:
    def test_unit_segment_length(self):
        X = PLSet.of([segment([0.0, 0.0], [1.0, 0.0])])
        est = crofton_volume_mc(X, samples=100_000, seed=11)
        assert within(est.estimate, est.stderr, 1.0, k=4)
        assert 0.0 <= est.zero_hit_fraction < 1.0

    def test_square_area_by_points(self, unit_square):
        est = crofton_volume_mc(PLSet.of([unit_square]), samples=10_000, seed=2)
        assert within(est.estimate, est.stderr, 1.0, k=4)

    def test_points_are_counted(self):
        X = PLSet.of([point([0.0, 0.0]), point([2.0, 0.0])])
        assert crofton_volume_mc(X).estimate == 2.0

    def test_mixed_dimensions_rejected(self, unit_square):
        X = PLSet.of([unit_square, segment([3.0, 0.0], [4.0, 0.0])])
        with pytest.raises(ValidationError):
            crofton_volume_mc(X)

    def test_window_must_contain_the_set(self, unit_square):
        with pytest.raises(ValidationError):
            crofton_volume_mc(PLSet.of([unit_square]), window=([0.0, 0.0], [0.5, 0.5]))

    def test_deterministic_across_runs(self):
        X = PLSet.of([segment([0.0, 0.0], [1.0, 1.0])])
        a = crofton_volume_mc(X, samples=8_000, seed=4, workers=3)
        b = crofton_volume_mc(X, samples=8_000, seed=4, workers=3)
        assert a == b


@pytest.mark.unit
@pytest.mark.montecarlo
class TestSlices:
    def test_i_zero_is_euler_characteristic(self, unit_square):
        est = lk_via_slices_mc(PLSet.of([unit_square]), 0)
        assert est.estimate == 1.0
        assert est.stderr == 0.0

    def test_square_half_perimeter(self, unit_square):
        est = lk_via_slices_mc(PLSet.of([unit_square]), 1, samples=64_000, seed=5)
        assert within(est.estimate, est.stderr, 2.0, k=4)

    def test_square_area(self, unit_square):
        est = lk_via_slices_mc(PLSet.of([unit_square]), 2, samples=32_000, seed=6)
        assert within(est.estimate, est.stderr, 1.0, k=4)

    def test_cube_with_plane_slices(self):
        est = lk_via_slices_mc(PLSet.of([box([0, 0, 0], [1, 1, 1])]), 1, samples=64_000, seed=8)
        assert within(est.estimate, est.stderr, 3.0, k=4)

    def test_index_range(self, unit_square):
        with pytest.raises(DomainError):
            lk_via_slices_mc(PLSet.of([unit_square]), 3)
