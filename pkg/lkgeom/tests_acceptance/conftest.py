"""
Shared fixtures for the acceptance suites.
"""

from pathlib import Path

import numpy as np
import pytest

from lkgeom.model.cone import Cone, ConicGerm
from lkgeom.service.loader import load_document
from lkgeom.utils.metrics import metrics

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


def load(name: str):
    return load_document(str(FIXTURES / name))[1]


def within(estimate: float, stderr: float, expected: float, k: float = 3.0, floor: float = 1e-9) -> bool:
    return abs(estimate - expected) <= max(k * stderr, floor)


def random_cone(rng: np.random.Generator, n: int, rays: int) -> Cone:
    """Pointed cone spanned by ``rays`` Gaussian directions; redrawn until full-dimensional."""
    while True:
        C = Cone.from_generators(rng.standard_normal((rays, n)))
        if C.dim == n and C.lineality_dim == 0:
            return C


@pytest.fixture(autouse=True)
def _fresh_metrics():
    metrics.reset()
    yield


@pytest.fixture(scope="session")
def square():
    return load("square.json")


@pytest.fixture(scope="session")
def cube():
    return load("cube.json")


@pytest.fixture(scope="session")
def two_points():
    return load("two_points.json")


@pytest.fixture(scope="session")
def unit_segment():
    return load("unit_segment.json")


@pytest.fixture(scope="session")
def half_plane() -> ConicGerm:
    return load("half_plane.json")


@pytest.fixture(scope="session")
def quarter_plane() -> ConicGerm:
    return load("quarter_plane.json")


@pytest.fixture(scope="session")
def node():
    return load("node.json")


@pytest.fixture(scope="session")
def cusp():
    return load("cusp.json")
