"""
Unit tests for the brute-force fibre and region Euler characteristics.
"""

import pytest

from lkgeom.adapter.error.error import DomainError
from lkgeom.service.germ_oracle import _runs, germ_chi_oracle, oracle_table, parse_polynomial


@pytest.mark.unit
class TestParsing:
    def test_two_variables(self):
        poly, symbols = parse_polynomial("x*y")
        assert [s.name for s in symbols] == ["x", "y"]
        assert poly.total_degree() == 2

    @pytest.mark.parametrize("f", ["x*y*z", "x + 1", "sin(x)", "3"])
    def test_rejected(self, f):
        with pytest.raises(DomainError):
            parse_polynomial(f)

    def test_runs(self):
        import numpy as np

        assert _runs(np.array([True, True, False, True, False])) == 2
        assert _runs(np.array([True, True])) == 0


@pytest.mark.unit
class TestOneVariable:
    def test_square_level_sets(self):
        assert germ_chi_oracle("x**2", "closed-fibre", "+1") == 2
        assert germ_chi_oracle("x**2", "closed-fibre", "-1") == 0

    def test_region_is_an_open_interval(self):
        assert germ_chi_oracle("x", "fibre", ">") == -1

    def test_link_endpoints(self):
        assert germ_chi_oracle("x", "link", ">") == 1
        assert germ_chi_oracle("x**2", "link", ">") == 2
        assert germ_chi_oracle("x**2", "link", "<") == 0


@pytest.mark.unit
@pytest.mark.slow
class TestTwoVariables:
    def test_hyperbola_branches(self):
        assert germ_chi_oracle("x*y", "closed-fibre", "+1") == 2
        assert germ_chi_oracle("x*y", "fibre", "+1") == -2

    def test_hyperbola_link(self):
        assert germ_chi_oracle("x*y", "link", ">") == 2

    def test_hyperbolic_regions(self):
        assert germ_chi_oracle("x*y", "fibre", ">") == 2
        assert germ_chi_oracle("x*y", "closed-fibre", ">") == -2

    def test_sum_of_squares_table(self):
        table = oracle_table("x**2 + y**2")
        assert all(v == 0 for row in table.values() for v in row.values())
        assert "link" in table[">"] and "link" not in table["+1"]


@pytest.mark.unit
class TestArguments:
    def test_unknown_question(self):
        with pytest.raises(DomainError):
            germ_chi_oracle("x*y", "volume", "+1")

    def test_link_needs_a_region_sign(self):
        with pytest.raises(DomainError):
            germ_chi_oracle("x*y", "link", "+1")

    def test_radii_ordered(self):
        with pytest.raises(DomainError):
            germ_chi_oracle("x*y", "fibre", "+1", eps=2.0, eta=1.0)

    def test_start_level_range(self):
        with pytest.raises(DomainError):
            germ_chi_oracle("x*y", "fibre", "+1", resolution=20)
