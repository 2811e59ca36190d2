"""Assertion helpers shared by the unit tests."""

import json
from pathlib import Path

FIXTURES = Path(__file__).parent.parent / "fixtures"


def within(estimate: float, stderr: float, expected: float, k: float = 3.0, floor: float = 1e-9) -> bool:
    """|estimate - expected| inside k standard errors, with an absolute floor for zero-variance cases."""
    return abs(estimate - expected) <= max(k * stderr, floor)


def write_json(tmp_path: Path, name: str, payload) -> str:
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)
