"""
Unit tests for resolution data validation.
"""

import pytest

from lkgeom.adapter.error.error import ValidationError
from lkgeom.model.grothendieck import GrothendieckClass
from lkgeom.model.resolution import Component, ResolutionData, ResolutionStratum


def _components():
    return (Component("E", 2, 2, True), Component("D", 1, 1, False))


@pytest.mark.unit
class TestResolutionData:
    def test_node_fixture(self, node_resolution):
        assert node_resolution.exceptional_ids == ("E0",)
        assert node_resolution.monomial == (1, 1)
        s = node_resolution.singleton("E0")
        assert s.chi == 0
        assert node_resolution.cover_degree(s) == 2

    def test_cover_degree_is_gcd(self, cusp_resolution):
        pair = [s for s in cusp_resolution.strata if s.ids == ("E2", "E3")][0]
        assert cusp_resolution.cover_degree(pair) == 3

    def test_unknown_component(self):
        with pytest.raises(ValidationError) as exc:
            ResolutionData(2, _components(), (ResolutionStratum(("X",), chi=1),))
        assert exc.value.error_code == "UNKNOWN_COMPONENT"

    def test_duplicate_ids(self):
        with pytest.raises(ValidationError):
            ResolutionData(2, (Component("E", 1, 1, True), Component("E", 2, 2, True)), ())

    def test_needs_an_exceptional_component(self):
        with pytest.raises(ValidationError):
            ResolutionData(2, (Component("D", 1, 1, False),), (ResolutionStratum(("D",), chi=1),))

    def test_bad_sign_label(self):
        s = ResolutionStratum(("E",), chi_signed={"+": 1})
        with pytest.raises(ValidationError) as exc:
            ResolutionData(2, _components(), (s,))
        assert exc.value.error_code == "BAD_SIGN"

    def test_complex_class_must_be_integral(self):
        s = ResolutionStratum(("E",), klass=GrothendieckClass.from_triples([[0, 1, 2]]))
        with pytest.raises(ValidationError):
            ResolutionData(2, _components(), (s,))

    def test_bad_monomial(self):
        with pytest.raises(ValidationError):
            ResolutionData(2, _components(), (), monomial=(0, 1))

    def test_with_component(self, node_resolution):
        changed = node_resolution.with_component("E0", nu=3)
        assert changed.by_id["E0"].nu == 3
        assert node_resolution.by_id["E0"].nu == 2
