"""
Local invariants of conic polyhedral germs.

All quantities of a germ are signed sums over its cone nerve: every subset S of
cones contributes the intersection C_S with sign (-1)^{|S|+1}, and a piece of
multiplicity m adds (m - 1) extra copies of itself. Conic intersections always
contain the origin, so the nerve is the full simplex.

For a single convex cone C the work is done by its conic intrinsic volumes
v_j(C) = sum over j-faces F of (internal angle of F) x (external angle along F),
from which Lambda_i(C ∩ unit ball) = alpha_i * sum_{j >= i} v_j * flag(j, i).
"""

from itertools import combinations
from typing import Dict, FrozenSet, List, Tuple

import numpy as np

from lkgeom.adapter.error.error import DomainError, NumericalDiagnosticError, ValidationError
from lkgeom.conf import (
    ANGLE_MC_SAMPLES,
    ANGULAR_GRID,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    GENERICITY_ANGLE_TOL,
    MC_CHUNK,
    POLAR_RESAMPLE_LIMIT,
)
from lkgeom.model.cone import Cone, ConicGerm, intersect_cones
from lkgeom.model.results import (
    ConstructibleFn,
    LKVector,
    LocalLKVector,
    MCEstimate,
    MLCCMatrix,
    MLCCReport,
    PolarVector,
    SphericalValuations,
)
from lkgeom.service.constants import flag_coefficient, sphere_area, unit_ball_volume
from lkgeom.service.grassmann import sample_frames
from lkgeom.utils.logger import PerformanceTracker, get_logger
from lkgeom.utils.metrics import metrics, track_time
from lkgeom.utils.sharding import chunked, run_sharded, sum_shards

logger = get_logger(__name__)

SignedCones = List[Tuple[float, Cone]]


def cone_nerve(X0: ConicGerm) -> SignedCones:
    """(weight, cone) pairs whose weighted indicator sum is the germ's constructible function."""
    if not X0.pieces:
        raise ValidationError("A conic germ needs at least one cone", error_code="EMPTY_GERM")
    cones = X0.cones
    meets: Dict[FrozenSet[int], Cone] = {frozenset({j}): c for j, c in enumerate(cones)}
    out: SignedCones = [(1.0, c) for c in cones]
    for size in range(2, len(cones) + 1):
        for S in combinations(range(len(cones)), size):
            C = intersect_cones(meets[frozenset(S[:-1])], cones[S[-1]])
            meets[frozenset(S)] = C
            out.append((1.0 if size % 2 else -1.0, C))
    out += [(float(m - 1), c) for c, m in X0.pieces if m != 1]
    return out


def conic_intrinsic_volumes(
    C: Cone, rng: np.random.Generator = None, samples: int = ANGLE_MC_SAMPLES
) -> Tuple[np.ndarray, np.ndarray]:
    """(v_0, ..., v_n) of one cone and the variance of each entry."""
    n = C.ambient_dim
    v = np.zeros(n + 1)
    var = np.zeros(n + 1)
    for face in C.all_faces():
        a, sa = C.face_cone(face).solid_fraction(rng, samples)
        g, sg = C.normal_cone_at(face).solid_fraction(rng, samples)
        v[face.dim] += a * g
        var[face.dim] += (sa * g) ** 2 + (a * sg) ** 2
    return v, var


def _flag_matrix(n: int) -> np.ndarray:
    """F[i, j] = flag(j, i)."""
    return np.array([[flag_coefficient(j, i) for j in range(n + 1)] for i in range(n + 1)])


def local_lk(X0: ConicGerm, samples: int = ANGLE_MC_SAMPLES, seed: int = DEFAULT_SEED) -> LocalLKVector:
    """Lambda_i^loc = Lambda_i(X0 ∩ closed unit ball) / alpha_i."""
    n = X0.ambient_dim
    rng = np.random.default_rng(seed)
    F = _flag_matrix(n)
    total = np.zeros(n + 1)
    var = np.zeros(n + 1)
    nerve = cone_nerve(X0)
    for w, C in nerve:
        v, vv = conic_intrinsic_volumes(C, rng, samples)
        total += w * (F @ v)
        var += w * w * ((F ** 2) @ vv)
    # every cone contains the apex, so its truncation has Euler characteristic 1
    total[0] = sum(w for w, _ in nerve)
    var[0] = 0.0
    return LocalLKVector(tuple(float(x) for x in total), tuple(float(x) for x in np.sqrt(var)))


def truncated_lk(X0: ConicGerm, rho: float, samples: int = ANGLE_MC_SAMPLES, seed: int = DEFAULT_SEED) -> LKVector:
    """Lambda_i(X0 ∩ closed ball of radius rho)."""
    if rho <= 0:
        raise DomainError(f"Truncation radius must be positive, got {rho}")
    loc = local_lk(X0, samples, seed)
    factors = np.array([unit_ball_volume(i) * rho ** i for i in range(X0.ambient_dim + 1)])
    return LKVector.from_array(factors * loc.as_array(), factors * loc.errors())


def density(X0: ConicGerm, samples: int = ANGLE_MC_SAMPLES, seed: int = DEFAULT_SEED) -> float:
    """Theta_d(X0) = Vol_d(X0 ∩ unit ball) / alpha_d for a germ of pure dimension d."""
    if not X0.is_pure:
        raise ValidationError("Density needs every cone of the germ to have the same dimension", error_code="MIXED_DIMENSION")
    d = X0.dim
    rng = np.random.default_rng(seed)
    total = 0.0
    for w, C in cone_nerve(X0):
        if C.dim == d:
            total += w * C.solid_fraction(rng, samples)[0]
    return float(total)


# --- projections onto random planes ---------------------------------------


def _fraction_1d(C: Cone, u: np.ndarray, tol: float) -> Tuple[np.ndarray, np.ndarray]:
    """Share of the line R.u covered by the projection of C, for a batch of unit vectors u."""
    count = u.shape[0]
    bad = np.zeros(count, dtype=bool)
    if C.lineality_dim:
        lp = np.linalg.norm(u @ C.lineality, axis=1)
        bad |= lp < tol
        frac = np.ones(count)
    elif C.rays.shape[0]:
        p = u @ C.rays.T
        bad |= np.any(np.abs(p) < tol, axis=1)
        pos = np.any(p > 0, axis=1)
        neg = np.any(p < 0, axis=1)
        frac = np.where(pos & neg, 1.0, np.where(pos | neg, 0.5, 0.0))
    else:
        frac = np.zeros(count)
    return frac, bad


def _fraction_2d(C: Cone, frames: np.ndarray, tol: float) -> Tuple[np.ndarray, np.ndarray]:
    """Angular share of the plane covered by the projection of C, for a batch of 2-frames."""
    count = frames.shape[0]
    bad = np.zeros(count, dtype=bool)
    l = C.lineality_dim
    if l >= 2:
        sv = np.linalg.svd(np.einsum("cni,nl->cil", frames, C.lineality), compute_uv=False)
        bad |= sv.min(axis=1) < tol
        return np.ones(count), bad
    dirs = [np.einsum("cni,kn->cki", frames, C.rays)] if C.rays.shape[0] else []
    if l == 1:
        d = np.einsum("cni,n->ci", frames, C.lineality[:, 0])[:, None, :]
        dirs += [d, -d]
    if not dirs:
        return np.zeros(count), bad
    D = np.concatenate(dirs, axis=1)
    norms = np.linalg.norm(D, axis=2)
    bad |= np.any(norms < tol, axis=1)
    D = D / np.maximum(norms, 1e-300)[..., None]
    cross = D[:, :1, 0] * D[:, :, 1] - D[:, :1, 1] * D[:, :, 0]
    parallel = np.all(np.abs(cross) < 1e-9, axis=1)
    ang = np.sort(np.arctan2(D[..., 1], D[..., 0]), axis=1)
    gaps = np.diff(ang, axis=1)
    wrap = 2 * np.pi - (ang[:, -1] - ang[:, 0])
    g = np.maximum(gaps.max(axis=1, initial=0.0), wrap)
    frac = np.where(g >= np.pi - 1e-9, (2 * np.pi - g) / (2 * np.pi), 1.0)
    return np.where(parallel, 0.0, frac), bad


def _fraction_general(
    C: Cone, frame: np.ndarray, tol: float, rng: np.random.Generator, samples: int
) -> Tuple[float, bool]:
    i = frame.shape[1]
    if C.rays.shape[0] and np.any(np.linalg.norm(C.rays @ frame, axis=1) < tol):
        return 0.0, True
    if C.lineality_dim:
        sv = np.linalg.svd(frame.T @ C.lineality, compute_uv=False)
        if sv.min() < tol:
            return 0.0, True
    K = C.project(frame)
    if K.dim < i:
        return 0.0, False
    return K.solid_fraction(rng, samples)[0], False


def _theta_batch(
    items: SignedCones, frames: np.ndarray, rng: np.random.Generator, samples: int
) -> Tuple[np.ndarray, np.ndarray]:
    """theta_i for a batch of i-frames, and the mask of non-generic frames."""
    count, _, i = frames.shape
    tol = GENERICITY_ANGLE_TOL
    theta = np.zeros(count)
    bad = np.zeros(count, dtype=bool)
    for w, C in items:
        if i == 1:
            f, b = _fraction_1d(C, frames[:, :, 0], tol)
        elif i == 2:
            f, b = _fraction_2d(C, frames, tol)
        else:
            pairs = [_fraction_general(C, frames[c], tol, rng, samples) for c in range(count)]
            f = np.array([p[0] for p in pairs])
            b = np.array([p[1] for p in pairs], dtype=bool)
        theta += w * f
        bad |= b
    return theta, bad


@track_time("polar_invariant")
def polar_invariant(
    X0: ConicGerm,
    i: int,
    plane_samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    angle_samples: int = ANGLE_MC_SAMPLES,
) -> MCEstimate:
    """sigma_i(X0): average over i-planes P of theta_i of the pushforward of 1_{X0} to P."""
    n = X0.ambient_dim
    if not (0 <= i <= n):
        raise DomainError(f"polar_invariant needs 0 <= i <= n, got i={i}, n={n}")
    items = cone_nerve(X0)
    if i == 0:
        return MCEstimate(float(sum(w for w, _ in items)), 0.0, 0)
    if i == n:
        rng = np.random.default_rng(seed)
        val = var = 0.0
        for w, C in items:
            if C.dim == n:
                f, se = C.solid_fraction(rng, angle_samples)
                val += w * f
                var += (w * se) ** 2
        return MCEstimate(float(val), float(np.sqrt(var)), 0)

    def kernel(rng: np.random.Generator, count: int) -> np.ndarray:
        s = s2 = rejected = 0.0
        for step in chunked(count, MC_CHUNK):
            theta, bad = _theta_batch(items, sample_frames(i, n, step, rng), rng, angle_samples)
            while bad.any():
                rejected += int(bad.sum())
                if rejected > POLAR_RESAMPLE_LIMIT * count:
                    raise NumericalDiagnosticError(
                        f"polar_invariant: {int(rejected)} of {count} planes were non-generic",
                        error_code="NONGENERIC_PLANES",
                    )
                idx = np.flatnonzero(bad)
                theta[idx], bad_new = _theta_batch(items, sample_frames(i, n, idx.size, rng), rng, angle_samples)
                bad[:] = False
                bad[idx] = bad_new
            s += float(theta.sum())
            s2 += float((theta * theta).sum())
        return np.array([s, s2, rejected])

    with PerformanceTracker(logger, f"polar_invariant[{i}]") as perf:
        s, s2, rejected = sum_shards(run_sharded(kernel, plane_samples, seed, workers))
        mean = s / plane_samples
        var = max(s2 / plane_samples - mean * mean, 0.0)
        perf.add_metric("planes", plane_samples)
        perf.add_metric("rejected", int(rejected))
    metrics.increment("planes_rejected", int(rejected))
    return MCEstimate(float(mean), float(np.sqrt(var / plane_samples)), plane_samples)


def polar_vector(
    X0: ConicGerm, plane_samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED, workers: int = 1
) -> PolarVector:
    ests = [polar_invariant(X0, i, plane_samples, seed + i, workers) for i in range(X0.ambient_dim + 1)]
    return PolarVector(tuple(e.estimate for e in ests), tuple(e.stderr for e in ests))


# --- pushforward ----------------------------------------------------------


def _sector_value(items: SignedCones, projected: List[Cone], phi: np.ndarray) -> np.ndarray:
    dirs = np.column_stack([np.cos(phi), np.sin(phi)])
    out = np.zeros(phi.size)
    for (w, _), K in zip(items, projected):
        if K.dim == 2:
            out += w * K.contains_many(dirs)
    return np.rint(out).astype(int)


def pushforward(X0: ConicGerm, frame) -> ConstructibleFn:
    """
    Fibre Euler characteristic of the projection of X0 ∩ closed unit ball onto the plane P.

    Fibres over small nonzero y are convex slices of each nerve cone, so the
    value at y is the signed count of projected nerve cones containing the
    direction of y. Target dimensions 0, 1 and 2 are supported.
    """
    P = np.asarray(frame, dtype=float).reshape(X0.ambient_dim, -1)
    i = P.shape[1]
    items = cone_nerve(X0)
    origin_value = int(round(sum(w for w, _ in items)))
    if i == 0:
        return ConstructibleFn(0, (), origin_value)
    tol = GENERICITY_ANGLE_TOL
    if i == 1:
        plus = minus = 0.0
        for w, C in items:
            _, bad = _fraction_1d(C, P[:, 0][None], tol)
            if bad[0]:
                raise NumericalDiagnosticError("Projection line is not generic for the germ", error_code="NONGENERIC_PLANE")
            gens = C.generators()
            p = gens @ P[:, 0] if gens.shape[0] else np.zeros(0)
            plus += w * bool(np.any(p > tol))
            minus += w * bool(np.any(p < -tol))
        regions = (((-np.pi / 2, np.pi / 2), int(round(plus))), ((np.pi / 2, 3 * np.pi / 2), int(round(minus))))
        return ConstructibleFn(1, regions, origin_value, (0.5, 0.5))
    if i > 2:
        raise DomainError(f"pushforward supports target dimension <= 2, got {i}")

    for _, C in items:
        _, bad = _fraction_2d(C, P[None], tol)
        if bad[0]:
            raise NumericalDiagnosticError("Projection plane is not generic for the germ", error_code="NONGENERIC_PLANE")
    projected = [C.project(P) for _, C in items]
    step = 2 * np.pi / ANGULAR_GRID
    centres = (np.arange(ANGULAR_GRID) + 0.5) * step
    values = _sector_value(items, projected, centres)
    change = np.flatnonzero(values != np.roll(values, 1))
    if change.size == 0:
        return ConstructibleFn(2, (((0.0, 2 * np.pi), int(values[0])),), origin_value, (1.0,))

    bounds = []
    for k in change:
        a, b = centres[k] - step, centres[k]
        va = values[k - 1]
        for _ in range(40):
            mid = 0.5 * (a + b)
            if _sector_value(items, projected, np.array([mid]))[0] == va:
                a = mid
            else:
                b = mid
        bounds.append(0.5 * (a + b))
    gaps = np.diff(bounds + [bounds[0] + 2 * np.pi])
    if np.any(gaps < tol):
        raise NumericalDiagnosticError("Region boundaries collide on the probe circle", error_code="NONGENERIC_PLANE")
    regions = []
    for j, k in enumerate(change):
        start = bounds[j]
        stop = bounds[j + 1] if j + 1 < len(bounds) else bounds[0] + 2 * np.pi
        regions.append(((float(start), float(stop)), int(values[k])))
    dens = tuple((stop - start) / (2 * np.pi) for (start, stop), _ in regions)
    return ConstructibleFn(2, tuple(regions), origin_value, dens)


# --- multidimensional local Cauchy-Crofton --------------------------------


def mlcc_matrix(n: int) -> MLCCMatrix:
    """m_i^j = flag(j, i) - flag(j - 1, i) for 1 <= i <= j <= n."""
    if n < 1:
        raise DomainError(f"mlcc_matrix needs n >= 1, got {n}")
    M = np.zeros((n, n))
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            M[i - 1, j - 1] = flag_coefficient(j, i) - flag_coefficient(j - 1, i)
    return MLCCMatrix(n, M)


def mlcc_verify(
    X0: ConicGerm,
    tolerance: float = 1e-3,
    plane_samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> MLCCReport:
    """Compare (Lambda_1^loc, ..., Lambda_n^loc) with M . (sigma_1, ..., sigma_n)."""
    n = X0.ambient_dim
    lam = local_lk(X0, seed=seed)
    sig = polar_vector(X0, plane_samples, seed, workers)
    M = mlcc_matrix(n).entries
    s = sig.as_array()[1:]
    se = sig.errors()[1:]
    pred = M @ s
    pred_se = np.sqrt((M ** 2) @ (se ** 2) + lam.errors()[1:] ** 2)
    resid = np.abs(lam.as_array()[1:] - pred)
    thresholds = np.maximum(tolerance, 3.0 * pred_se)
    passed = bool(np.all(resid < thresholds))
    logger.info_data("mlcc identity checked", n=n, passed=passed, max_residual=float(resid.max()))
    return MLCCReport(
        lambda_loc=tuple(float(x) for x in lam.as_array()),
        sigma=tuple(float(x) for x in sig.as_array()),
        predicted=tuple(float(x) for x in pred),
        residuals=tuple(float(x) for x in resid),
        thresholds=tuple(float(x) for x in thresholds),
        passed=passed,
    )


# --- spherical valuations -------------------------------------------------


def spherical_valuations(
    K: Cone, plane_samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED, workers: int = 1
) -> SphericalValuations:
    """
    Valuations of the spherical polytope K ∩ S^{n-1} read off its cone K.

    Lambda-hat and sigma-hat are the local invariants of the cone; Xi_i sums
    spherical i-face volumes times exterior angles, i.e. area(S^i) * v_{i+1}(K).
    """
    germ = ConicGerm.of([K])
    n = K.ambient_dim
    lam = local_lk(germ, seed=seed)
    sig = polar_vector(germ, plane_samples, seed, workers)
    v, _ = conic_intrinsic_volumes(K, np.random.default_rng(seed))
    xi = tuple(float(sphere_area(i) * v[i + 1]) for i in range(n)) + (0.0,)
    return SphericalValuations(lam.values, xi, sig.values)
