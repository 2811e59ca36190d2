"""
pytest configuration and shared fixtures.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to Python path
project_root = Path(__file__).parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

FIXTURES = project_root / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def unit_square():
    from lkgeom.model.polytope import box

    return box([0, 0], [1, 1])


@pytest.fixture
def unit_cube():
    from lkgeom.model.polytope import box

    return box([0, 0, 0], [1, 1, 1])


@pytest.fixture
def half_plane_germ():
    from lkgeom.model.cone import Cone, ConicGerm

    return ConicGerm.of([Cone.from_generators([[1, 0], [-1, 0], [0, 1]])])


@pytest.fixture
def quarter_plane_germ():
    from lkgeom.model.cone import Cone, ConicGerm

    return ConicGerm.of([Cone.from_generators([[1, 0], [0, 1]])])


@pytest.fixture
def half_line_germ():
    from lkgeom.model.cone import Cone, ConicGerm

    return ConicGerm.of([Cone.from_generators([[1, 0]], ambient_dim=2)])


@pytest.fixture
def node_resolution():
    from lkgeom.service.loader import load_document

    return load_document(str(FIXTURES / "node.json"))[1]


@pytest.fixture
def cusp_resolution():
    from lkgeom.service.loader import load_document

    return load_document(str(FIXTURES / "cusp.json"))[1]


@pytest.fixture
def xy_real_resolution():
    from lkgeom.service.loader import load_document

    return load_document(str(FIXTURES / "xy_real.json"))[1]


@pytest.fixture
def x2y2_real_resolution():
    from lkgeom.service.loader import load_document

    return load_document(str(FIXTURES / "x2y2_real.json"))[1]


@pytest.fixture(autouse=True)
def reset_metrics():
    from lkgeom.utils.metrics import metrics

    metrics.reset()
    yield


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
