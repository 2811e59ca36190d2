# lkgeom/service/constants.py
from functools import lru_cache

import numpy as np
from scipy.special import comb, gamma

from lkgeom.adapter.error.error import DomainError


@lru_cache(maxsize=None)
def unit_ball_volume(i: int) -> float:
    """Volume alpha_i of the unit ball in R^i."""
    if i < 0:
        raise DomainError(f"unit_ball_volume needs i >= 0, got {i}")
    if i == 0:
        return 1.0
    return float(np.pi ** (i / 2.0) / gamma(i / 2.0 + 1.0))


@lru_cache(maxsize=None)
def crofton_constant(d: int, n: int) -> float:
    """beta(d, n) = G((n-d+1)/2) G((d+1)/2) / (G((n+1)/2) G(1/2))."""
    if d < 0 or n < 0 or d > n:
        raise DomainError(f"crofton_constant needs 0 <= d <= n, got d={d}, n={n}")
    num = gamma((n - d + 1) / 2.0) * gamma((d + 1) / 2.0)
    den = gamma((n + 1) / 2.0) * gamma(0.5)
    return float(num / den)


def sphere_area(i: int) -> float:
    """(i)-dimensional area of the unit sphere S^i in R^{i+1}."""
    return (i + 1) * unit_ball_volume(i + 1)


def flag_coefficient(j: int, i: int) -> float:
    """C(j, i) * alpha_j / (alpha_i * alpha_{j-i}); zero outside 0 <= i <= j."""
    if i < 0 or j < 0 or i > j:
        return 0.0
    return float(comb(j, i, exact=True)) * unit_ball_volume(j) / (unit_ball_volume(i) * unit_ball_volume(j - i))
