"""The Euler-weighted tube integral counts overlapping balls with multiplicity."""

import numpy as np
import pytest

from lkgeom.model.plset import PLSet
from lkgeom.model.polytope import point
from lkgeom.service.tube_steiner import tube_volume_mc, weighted_tube_integral_mc
from lkgeom.tests_acceptance.conftest import within

EPS = 1.5


@pytest.mark.acceptance
@pytest.mark.montecarlo
class TestWeightedTube:
    def test_two_points(self, two_points):
        target = 2 * np.pi * EPS ** 2
        weighted = weighted_tube_integral_mc(two_points, EPS, samples=1_000_000, seed=21)
        plain = tube_volume_mc(two_points, EPS, samples=1_000_000, seed=22)
        assert within(weighted.estimate, weighted.stderr, target)
        assert abs(plain.estimate - target) > 5 * plain.stderr

    def test_far_apart_points_agree(self):
        X = PLSet.of([point([0.0, 0.0]), point([5.0, 0.0])])
        weighted = weighted_tube_integral_mc(X, 1.0, samples=200_000, seed=23)
        plain = tube_volume_mc(X, 1.0, samples=200_000, seed=23)
        assert weighted.estimate == pytest.approx(plain.estimate)
