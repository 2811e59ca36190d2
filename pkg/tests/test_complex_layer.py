"""
Unit tests for the sigma-tilde tables, the Kashiwara recursion and the Euler obstruction.
"""

import pytest

from lkgeom.adapter.error.error import ValidationError
from lkgeom.model.results import ComplexGermData, Stratum
from lkgeom.service.complex_layer import (
    euler_obstruction,
    kashiwara_consistency,
    kashiwara_E,
    sigma_tilde_from_mu,
)
from lkgeom.service.loader import load_document


def _germ(fixtures_dir, name):
    return load_document(str(fixtures_dir / name))[1]


@pytest.mark.unit
class TestSigmaTilde:
    def test_smooth_germ_gives_ones(self):
        assert sigma_tilde_from_mu([1, 0, 0, 0], 3) == (1, 1, 1)

    def test_all_zero_sequence(self):
        assert sigma_tilde_from_mu([0, 0, 0], 2) == (1, 1)

    def test_a1_surface(self):
        assert sigma_tilde_from_mu([1, 1, 1, 1], 3) == (1, 0, 2)

    def test_length_checked(self):
        with pytest.raises(ValidationError):
            sigma_tilde_from_mu([1, 0], 3)

    def test_negative_rejected(self):
        with pytest.raises(ValidationError):
            sigma_tilde_from_mu([1, -1, 0], 2)


@pytest.mark.unit
class TestEulerObstruction:
    def test_alternating_sum(self):
        assert euler_obstruction([2, 2]) == 0
        assert euler_obstruction([3]) == 3

    def test_negative_rejected(self):
        with pytest.raises(ValidationError):
            euler_obstruction([1, -1])


@pytest.mark.unit
class TestKashiwara:
    """Recursion over the stratification against the polar multiplicities."""

    @pytest.mark.parametrize(
        "name,E",
        [
            ("smooth_curve.json", (1, 0)),
            ("cusp_curve.json", (2, 0)),
            ("triple_point.json", (3, 0)),
            ("a1_surface.json", (0, 2, 0)),
        ],
    )
    def test_fixtures_pass(self, fixtures_dir, name, E):
        report = kashiwara_consistency(_germ(fixtures_dir, name))
        assert report.E == E
        assert report.passed
        assert report.differences == report.polar_multiplicities

    def test_single_index(self, fixtures_dir):
        data = _germ(fixtures_dir, "cusp_curve.json")
        assert kashiwara_E(data, 0) == 2
        assert kashiwara_E(data, 0, stratum="0") == 1

    def test_wrong_polar_fails(self, fixtures_dir):
        data = _germ(fixtures_dir, "cusp_curve.json")
        broken = ComplexGermData(data.mu_sequence, (1,), data.strata, data.dim)
        assert not kashiwara_consistency(broken).passed

    def test_cycle_detected(self):
        data = ComplexGermData(
            (1, 0, 0),
            (),
            (
                Stratum("A", 2, ("B",), (1, 1, 1)),
                Stratum("B", 1, ("A",), (1, 1)),
            ),
        )
        with pytest.raises(ValidationError):
            kashiwara_consistency(data)

    def test_unknown_parent(self):
        data = ComplexGermData((1, 0, 0), (), (Stratum("A", 1, ("Z",), (1, 1)),))
        with pytest.raises(ValidationError):
            kashiwara_E(data, 0)

    def test_negative_index(self, fixtures_dir):
        with pytest.raises(ValidationError):
            kashiwara_E(_germ(fixtures_dir, "smooth_curve.json"), -1)
