"""
Exterior angles, exact Lipschitz-Killing curvatures of polytopes and their
unions, and Monte Carlo checks of the tube formulas.
"""

from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from lkgeom.adapter.error.error import DomainError, ValidationError
from lkgeom.conf import ANGLE_MC_SAMPLES, DEFAULT_SAMPLES, DEFAULT_SEED, MC_CHUNK
from lkgeom.model.plset import PLSet
from lkgeom.model.polytope import Face, Polytope, normal_cone
from lkgeom.model.results import LKVector, MCEstimate
from lkgeom.service.constants import unit_ball_volume
from lkgeom.utils.logger import PerformanceTracker, get_logger
from lkgeom.utils.metrics import metrics, track_time
from lkgeom.utils.sharding import chunked, run_sharded, sum_shards

logger = get_logger(__name__)

SetLike = Union[PLSet, Polytope]


def _as_plset(X: SetLike) -> PLSet:
    return X if isinstance(X, PLSet) else PLSet.of([X])


def exterior_angle(
    P: Polytope,
    face: Face,
    mc_samples: int = ANGLE_MC_SAMPLES,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[float, float]:
    """
    gamma(F, P) with its standard error.

    The probability measure of the directions of the normal cone inside its own
    linear span; gamma(P, P) = 1.
    """
    if face.vertex_ids == P.top.vertex_ids:
        return 1.0, 0.0
    C = normal_cone(P, face)
    if C.dim == 0:
        raise ValidationError(
            f"Proper face {sorted(face.vertex_ids)} has a zero normal cone", error_code="INCONSISTENT_LATTICE"
        )
    return C.solid_fraction(rng, mc_samples)


def steiner_coefficients(P: Polytope, mc_samples: int = ANGLE_MC_SAMPLES, seed: int = DEFAULT_SEED) -> LKVector:
    """Lambda_i(P) = sum over i-faces of Vol_i(F) * gamma(F, P)."""
    n = P.ambient_dim
    rng = np.random.default_rng(seed)
    values = np.zeros(n + 1)
    var = np.zeros(n + 1)
    exact = True
    for i, faces in P.faces.items():
        for f in faces:
            g, se = exterior_angle(P, f, mc_samples, rng)
            vol = P.face_volume(f)
            values[i] += vol * g
            var[i] += (vol * se) ** 2
            exact = exact and se == 0.0 and normal_cone_is_small(P, f)
    return LKVector.from_array(values, np.sqrt(var), "exact" if exact else "mc")


def normal_cone_is_small(P: Polytope, face: Face) -> bool:
    """True when the exterior angle along ``face`` has a closed form (pointed part of dim <= 3)."""
    if face.vertex_ids == P.top.vertex_ids:
        return True
    return normal_cone(P, face).pointed_basis.shape[1] <= 3


def steiner_polynomial(lk: LKVector, eps):
    """sum_i alpha_i * Lambda_{n-i} * eps^i."""
    n = lk.ambient_dim
    e = np.asarray(eps, dtype=float)
    total = np.zeros_like(e)
    for i in range(n + 1):
        total = total + unit_ball_volume(i) * lk[n - i] * e ** i
    return float(total) if np.ndim(total) == 0 else total


def lk_curvatures(X: SetLike, mc_samples: int = ANGLE_MC_SAMPLES, seed: int = DEFAULT_SEED) -> LKVector:
    """Lambda_i of a finite union by inclusion-exclusion over the nerve."""
    X = _as_plset(X)
    n = X.ambient_dim
    total = np.zeros(n + 1)
    var = np.zeros(n + 1)
    methods = set()
    for S, Q in X.nerve().items():
        lk = steiner_coefficients(Q, mc_samples, seed)
        sign = 1.0 if len(S) % 2 else -1.0
        total += sign * lk.as_array()
        var += lk.errors() ** 2
        methods.add(lk.method)
    method = "mc" if "mc" in methods else "exact"
    return LKVector.from_array(total, np.sqrt(var), method)


def _uniform_box(rng: np.random.Generator, lo: np.ndarray, hi: np.ndarray, count: int) -> np.ndarray:
    return lo + (hi - lo) * rng.random((count, lo.size))


def _tube_box(X: PLSet, eps: float) -> Tuple[np.ndarray, np.ndarray, float]:
    lo, hi = X.bounding_box()
    lo, hi = lo - eps, hi + eps
    return lo, hi, float(np.prod(hi - lo))


@track_time("tube_volume_mc")
def tube_volume_mc(
    X: SetLike, eps: float, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED, workers: int = 1
) -> MCEstimate:
    """Vol_n of the closed eps-neighbourhood, by uniform sampling in the inflated bounding box."""
    if eps < 0:
        raise DomainError(f"Tube radius must be >= 0, got {eps}")
    X = _as_plset(X)
    if X.is_empty:
        return MCEstimate(0.0, 0.0, 0)
    lo, hi, vol = _tube_box(X, eps)

    def kernel(rng: np.random.Generator, count: int) -> np.ndarray:
        hits = 0
        for step in chunked(count, MC_CHUNK):
            hits += int(np.count_nonzero(X.distance(_uniform_box(rng, lo, hi, step)) <= eps))
        return np.array([hits], dtype=float)

    with PerformanceTracker(logger, "tube_volume_mc") as perf:
        hits = sum_shards(run_sharded(kernel, samples, seed, workers))[0]
        p = hits / samples
        perf.add_metric("samples", samples)
        perf.add_metric("hit_fraction", round(p, 6))
    metrics.increment("samples_drawn", samples)
    return MCEstimate(vol * p, vol * float(np.sqrt(p * (1 - p) / samples)), samples)


def chi_ball(X: SetLike, x, eps: float) -> int:
    """chi(X ∩ closed ball(x, eps)) by the nerve rule."""
    return int(_as_plset(X).chi_ball_many(np.atleast_2d(np.asarray(x, dtype=float)), eps)[0])


@track_time("weighted_tube_integral_mc")
def weighted_tube_integral_mc(
    X: SetLike, eps: float, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED, workers: int = 1
) -> MCEstimate:
    """Integral over the tube of chi(X ∩ closed ball(x, eps))."""
    if eps < 0:
        raise DomainError(f"Tube radius must be >= 0, got {eps}")
    X = _as_plset(X)
    if X.is_empty:
        return MCEstimate(0.0, 0.0, 0)
    lo, hi, vol = _tube_box(X, eps)

    def kernel(rng: np.random.Generator, count: int) -> np.ndarray:
        s = s2 = 0.0
        for step in chunked(count, MC_CHUNK):
            w = X.chi_ball_many(_uniform_box(rng, lo, hi, step), eps).astype(float)
            s += float(w.sum())
            s2 += float((w * w).sum())
        return np.array([s, s2])

    with PerformanceTracker(logger, "weighted_tube_integral_mc") as perf:
        s, s2 = sum_shards(run_sharded(kernel, samples, seed, workers))
        mean = s / samples
        var = max(s2 / samples - mean * mean, 0.0)
        perf.add_metric("samples", samples)
    metrics.increment("samples_drawn", samples)
    return MCEstimate(vol * mean, vol * float(np.sqrt(var / samples)), samples)


def smooth_benchmark_tube(shape: str, r: float, eps: float) -> float:
    """Closed-form tube volumes: circle and disc in R^2, sphere and ball in R^3."""
    if r <= 0 or eps < 0:
        raise DomainError(f"Benchmark needs r > 0 and eps >= 0, got r={r}, eps={eps}")
    if shape == "disc":
        return float(np.pi * (r + eps) ** 2)
    if shape == "ball":
        return float(4.0 * np.pi / 3.0 * (r + eps) ** 3)
    if shape in ("circle", "sphere") and eps >= r:
        raise DomainError(f"Tube radius {eps} is beyond the reach {r} of the {shape}")
    if shape == "circle":
        return float(np.pi * ((r + eps) ** 2 - (r - eps) ** 2))
    if shape == "sphere":
        return float(4.0 * np.pi / 3.0 * ((r + eps) ** 3 - (r - eps) ** 3))
    raise DomainError(f"Unknown benchmark shape {shape!r}")


def tube_sweep(
    X: SetLike,
    eps_values: Sequence[float],
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> List[Tuple[float, float, float, float]]:
    """(eps, MC estimate, stderr, Steiner polynomial) per radius; one seed stream per radius index."""
    X = _as_plset(X)
    lk = lk_curvatures(X)
    rows = []
    for k, eps in enumerate(eps_values):
        est = tube_volume_mc(X, float(eps), samples, seed + k, workers)
        rows.append((float(eps), est.estimate, est.stderr, steiner_polynomial(lk, float(eps))))
    return rows
