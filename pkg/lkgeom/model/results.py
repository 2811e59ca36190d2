"""Numeric result records returned by the geometric services."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np


@dataclass(frozen=True)
class LKVector:
    """(Lambda_0, ..., Lambda_n) with optional per-entry standard errors."""

    ambient_dim: int
    values: Tuple[float, ...]
    stderr: Tuple[float, ...] = ()
    method: str = "exact"

    def __getitem__(self, i: int) -> float:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def errors(self) -> np.ndarray:
        if not self.stderr:
            return np.zeros(len(self.values))
        return np.asarray(self.stderr, dtype=float)

    @classmethod
    def from_array(cls, values, stderr=None, method: str = "exact") -> "LKVector":
        values = tuple(float(v) for v in values)
        err = tuple(float(e) for e in stderr) if stderr is not None else ()
        return cls(len(values) - 1, values, err, method)

    def __add__(self, other: "LKVector") -> "LKVector":
        err = np.sqrt(self.errors() ** 2 + other.errors() ** 2)
        return LKVector.from_array(self.as_array() + other.as_array(), err, self.method)

    def scaled(self, c: float) -> "LKVector":
        return LKVector.from_array(c * self.as_array(), abs(c) * self.errors(), self.method)


@dataclass(frozen=True)
class MCEstimate:
    estimate: float
    stderr: float
    samples: int


@dataclass(frozen=True)
class SliceStatistics:
    estimate: float
    stderr: float
    samples: int
    zero_hit_fraction: float
    resampled: int = 0

    def __post_init__(self):
        if self.stderr < 0:
            raise ValueError("stderr must be nonnegative")
        if not (0.0 <= self.zero_hit_fraction <= 1.0):
            raise ValueError("zero_hit_fraction must lie in [0, 1]")


@dataclass(frozen=True)
class LocalLKVector:
    values: Tuple[float, ...]
    stderr: Tuple[float, ...] = ()

    def __getitem__(self, i: int) -> float:
        return self.values[i]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def errors(self) -> np.ndarray:
        return np.asarray(self.stderr, dtype=float) if self.stderr else np.zeros(len(self.values))


@dataclass(frozen=True)
class PolarVector:
    values: Tuple[float, ...]
    stderr: Tuple[float, ...] = ()

    def __getitem__(self, i: int) -> float:
        return self.values[i]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def errors(self) -> np.ndarray:
        return np.asarray(self.stderr, dtype=float) if self.stderr else np.zeros(len(self.values))


@dataclass(frozen=True)
class ConstructibleFn:
    """
    Integer-valued function on a neighbourhood of 0 in an i-plane, constant on conic regions.

    Regions are angular sectors (start, stop) of the probe circle; for i = 1 the
    two half-lines are the sectors around angle 0 and angle pi.
    """

    target_dim: int
    regions: Tuple[Tuple[Tuple[float, float], int], ...]
    origin_value: int
    densities: Tuple[float, ...] = ()

    def value_at(self, angle: float) -> int:
        a = float(angle)
        for (start, stop), v in self.regions:
            if (a - start) % (2 * np.pi) < stop - start:
                return v
        return self.origin_value

    def theta(self) -> float:
        """Sum over regions of value x angular density."""
        if self.target_dim == 0:
            return float(self.origin_value)
        if self.densities:
            return float(sum(v * d for (_, v), d in zip(self.regions, self.densities)))
        return float(sum(v * (stop - start) / (2 * np.pi) for (start, stop), v in self.regions))


@dataclass(frozen=True)
class MLCCMatrix:
    n: int
    entries: np.ndarray = field(repr=False)

    def __getitem__(self, ij: Tuple[int, int]) -> float:
        i, j = ij
        return float(self.entries[i - 1, j - 1])


@dataclass(frozen=True)
class MLCCReport:
    lambda_loc: Tuple[float, ...]
    sigma: Tuple[float, ...]
    predicted: Tuple[float, ...]
    residuals: Tuple[float, ...]
    thresholds: Tuple[float, ...]
    passed: bool


@dataclass(frozen=True)
class SphericalValuations:
    lambda_hat: Tuple[float, ...]
    xi: Tuple[float, ...]
    sigma_hat: Tuple[float, ...]

    def triples(self) -> List[Tuple[float, float, float]]:
        return list(zip(self.lambda_hat, self.xi, self.sigma_hat))


@dataclass(frozen=True)
class Stratum:
    id: str
    dim: int
    closure_of: Tuple[str, ...]
    sigma_tilde: Tuple[int, ...]


@dataclass(frozen=True)
class ComplexGermData:
    mu_sequence: Tuple[int, ...]
    polar_multiplicities: Tuple[int, ...]
    strata: Tuple[Stratum, ...]
    dim: Optional[int] = None

    def stratum(self, sid: str) -> Stratum:
        for s in self.strata:
            if s.id == sid:
                return s
        raise KeyError(sid)

    @property
    def by_id(self) -> Dict[str, Stratum]:
        return {s.id: s for s in self.strata}


@dataclass(frozen=True)
class KashiwaraReport:
    dim: int
    E: Tuple[int, ...]
    polar_multiplicities: Tuple[int, ...]
    differences: Tuple[int, ...]
    euler_obstruction: Optional[int]
    passed: bool
