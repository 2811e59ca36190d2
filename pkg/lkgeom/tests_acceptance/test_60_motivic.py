"""A'Campo and motivic consistency on the node and cusp fixtures."""

import pytest

from lkgeom.service.motivic import (
    acampo_lefschetz,
    consistency_check_14,
    euler_realization,
    milnor_fibre_by_series,
    milnor_number_brieskorn,
    motivic_milnor_fibre,
    zeta_from_resolution,
)


@pytest.mark.acceptance
@pytest.mark.exact
class TestMotivicConsistency:
    def test_node(self, node):
        report = consistency_check_14(node, 8)
        assert report.passed
        assert [r[0] for r in report.rows] == list(range(1, 9))
        S = motivic_milnor_fibre(zeta_from_resolution(node))
        mu = 1
        assert euler_realization(S, "complex") == 0 == 1 + (-1) ** (node.n - 1) * mu

    def test_cusp_milnor_fibre(self, cusp):
        mu = milnor_number_brieskorn(2, 3)
        assert acampo_lefschetz(cusp, 0) == 1 - mu == -1
        Z = zeta_from_resolution(cusp, allow_chi=True)
        assert euler_realization(motivic_milnor_fibre(Z), "complex") == 1 - mu
        assert milnor_fibre_by_series(Z) == motivic_milnor_fibre(Z)

    def test_cusp_consistency(self, cusp):
        assert consistency_check_14(cusp, 12).passed
