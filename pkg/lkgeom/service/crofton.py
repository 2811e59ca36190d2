"""
Cauchy-Crofton Monte Carlo estimators.

Random affine flats are drawn with a direction from the invariant measure on the
Grassmannian and an offset uniform in a ball of radius R (the half-diagonal of
the window) inside the orthogonal complement. Every flat meeting the window then
has its offset in that ball, so the flat measure restricted to those flats is
alpha_k R^k times the sampling expectation.
"""

from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from lkgeom.adapter.error.error import DomainError, NumericalDiagnosticError, ValidationError
from lkgeom.conf import CROFTON_NONGENERIC_LIMIT, DEFAULT_SAMPLES, DEFAULT_SEED, GEOM_TOL, MC_CHUNK
from lkgeom.model.linalg import affine_frame
from lkgeom.model.plset import PLSet
from lkgeom.model.polytope import Polytope
from lkgeom.model.results import SliceStatistics
from lkgeom.service.constants import crofton_constant, unit_ball_volume
from lkgeom.service.grassmann import complete_frames, sample_frames
from lkgeom.utils.logger import PerformanceTracker, get_logger
from lkgeom.utils.metrics import metrics, track_time
from lkgeom.utils.sharding import chunked, run_sharded, sum_shards

logger = get_logger(__name__)

Window = Tuple[np.ndarray, np.ndarray]
OFFSETS_PER_DIRECTION = 16


def _window(X: PLSet, window: Optional[Sequence]) -> Tuple[np.ndarray, float]:
    """Centre and radius of the ball enclosing the window."""
    lo, hi = X.bounding_box()
    if window is not None:
        wlo, whi = (np.asarray(w, dtype=float) for w in window)
        if np.any(wlo > lo + 1e-9) or np.any(whi < hi - 1e-9):
            raise ValidationError("Set is not contained in the window", error_code="OUTSIDE_WINDOW")
        lo, hi = wlo, whi
    centre = 0.5 * (lo + hi)
    radius = 0.5 * float(np.linalg.norm(hi - lo))
    return centre, max(radius, 1e-12)


def _uniform_ball(rng: np.random.Generator, count: int, k: int) -> np.ndarray:
    if k == 0:
        return np.zeros((count, 0))
    g = rng.standard_normal((count, k))
    g /= np.linalg.norm(g, axis=1)[:, None]
    return g * rng.random(count)[:, None] ** (1.0 / k)


def _check_nongeneric(rejected: int, drawn: int, what: str) -> None:
    if drawn and rejected > CROFTON_NONGENERIC_LIMIT * drawn:
        raise NumericalDiagnosticError(
            f"{what}: {rejected} of {drawn} flats were non-generic", error_code="NONGENERIC_FLATS"
        )


def _flat_hits(Q: Polytope, W: np.ndarray, U: np.ndarray, T: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Does the flat {W t + U s} meet the d-dimensional piece Q (d = codim of the flat)?

    Returns (hit, nongeneric) masks over the batch.
    """
    count, n, _ = U.shape
    o, B = affine_frame(Q.vertices)
    d = B.shape[1]
    M = np.concatenate([np.broadcast_to(B, (count, n, d)), -U], axis=2)
    det = np.linalg.det(M)
    singular = np.abs(det) < 1e-10
    M = np.where(singular[:, None, None], np.eye(n), M)
    rhs = np.einsum("cnk,ck->cn", W, T) - o
    sol = np.linalg.solve(M, rhs[..., None])[..., 0]
    x = o + sol[:, :d] @ B.T
    tol = GEOM_TOL * max(1.0, Q.diameter) * 10
    slack = (Q.facet_offsets[None, :] - x @ Q.facet_normals.T).min(axis=1)
    hit = (slack > tol) & ~singular
    nongeneric = singular | (np.abs(slack) <= tol)
    return hit, nongeneric


@track_time("crofton_volume_mc")
def crofton_volume_mc(
    X: PLSet,
    window: Optional[Sequence] = None,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> SliceStatistics:
    """Vol_d(X) = (1 / beta(d, n)) * integral over (n-d)-flats of Card(X ∩ flat)."""
    if X.is_empty:
        return SliceStatistics(0.0, 0.0, 0, 1.0)
    if not X.is_pure:
        raise ValidationError("Volume by intersection counting needs pieces of one dimension", error_code="NOT_PURE")
    n, d = X.ambient_dim, X.dim
    if d == 0:
        count = len({tuple(np.round(p.vertices[0], 12)) for p in X.pieces})
        return SliceStatistics(float(count), 0.0, 1, 0.0)
    centre, R = _window(X, window)
    scale = unit_ball_volume(d) * R ** d / crofton_constant(d, n)

    def draw(rng: np.random.Generator, m: int):
        W = sample_frames(d, n, m, rng)
        U = complete_frames(W)
        T = np.einsum("cnk,n->ck", W, centre) + R * _uniform_ball(rng, m, d)
        card = np.zeros(m)
        bad = np.zeros(m, dtype=bool)
        for Q in X.pieces:
            hit, ng = _flat_hits(Q, W, U, T)
            card += hit
            bad |= ng
        return card, bad

    def kernel(rng: np.random.Generator, count: int) -> np.ndarray:
        s = s2 = zeros = rejected = 0.0
        for step in chunked(count, MC_CHUNK):
            card, bad = draw(rng, step)
            while bad.any():
                rejected += int(bad.sum())
                _check_nongeneric(rejected, count, "crofton_volume_mc")
                card[bad], bad_new = draw(rng, int(bad.sum()))
                idx = np.flatnonzero(bad)
                bad[:] = False
                bad[idx] = bad_new
            s += float(card.sum())
            s2 += float((card * card).sum())
            zeros += float(np.count_nonzero(card == 0))
        return np.array([s, s2, zeros, rejected])

    with PerformanceTracker(logger, "crofton_volume_mc") as perf:
        s, s2, zeros, rejected = sum_shards(run_sharded(kernel, samples, seed, workers))
        _check_nongeneric(int(rejected), samples, "crofton_volume_mc")
        mean = s / samples
        var = max(s2 / samples - mean * mean, 0.0)
        perf.add_metric("samples", samples)
        perf.add_metric("resampled", int(rejected))
    metrics.increment("samples_drawn", samples)
    metrics.increment("samples_resampled", int(rejected))
    return SliceStatistics(scale * mean, scale * float(np.sqrt(var / samples)), samples, zeros / samples, int(rejected))


class _SliceTester:
    """Membership of offsets in the projection of one nerve polytope onto a fixed i-frame W."""

    def __init__(self, Q: Polytope, W: np.ndarray):
        self.i = W.shape[1]
        self.Q = Q
        self.tol = GEOM_TOL * max(1.0, Q.diameter) * 10
        Y = Q.vertices @ W
        self.empty = False
        if self.i == 1:
            self.lo, self.hi = float(Y.min()), float(Y.max())
            self.empty = self.hi - self.lo <= self.tol
        elif self.i == W.shape[0]:
            self.W = W
        else:
            o, B = affine_frame(Y)
            if B.shape[1] < self.i:
                self.empty = True
                return
            try:
                self.equations = ConvexHull(Y).equations
            except QhullError:
                self.empty = True

    def test(self, T: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        m = T.shape[0]
        if self.empty:
            return np.zeros(m, dtype=bool), np.zeros(m, dtype=bool)
        if self.i == 1:
            margin = np.minimum(T[:, 0] - self.lo, self.hi - T[:, 0])
        elif hasattr(self, "W"):
            A, b = self.Q.halfspaces
            margin = (b[None, :] - (T @ self.W.T) @ A.T).min(axis=1)
        else:
            margin = -(T @ self.equations[:, :-1].T + self.equations[:, -1]).max(axis=1)
        return margin > self.tol, np.abs(margin) <= self.tol


@track_time("lk_via_slices_mc")
def lk_via_slices_mc(
    X: PLSet,
    i: int,
    window: Optional[Sequence] = None,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> SliceStatistics:
    """
    Lambda_i(X) as the flat-measure integral of chi(X ∩ flat) over (n-i)-flats.

    Each sampled direction carries several offsets; the standard error comes
    from the per-direction block means.
    """
    n = X.ambient_dim
    if not (0 <= i <= n):
        raise DomainError(f"lk_via_slices_mc needs 0 <= i <= n, got i={i}, n={n}")
    if X.is_empty:
        return SliceStatistics(0.0, 0.0, 0, 1.0)
    if i == 0:
        chi = float(X.euler_characteristic())
        return SliceStatistics(chi, 0.0, 1, 1.0 if chi == 0 else 0.0)
    nerve = list(X.nerve().items())
    centre, R = _window(X, window)
    scale = unit_ball_volume(i) * R ** i / crofton_constant(i, n)

    def slice_chi(testers, W, m, rng):
        T = centre @ W + R * _uniform_ball(rng, m, i)
        chi = np.zeros(m)
        bad = np.zeros(m, dtype=bool)
        for sign, tester in testers:
            hit, ng = tester.test(T)
            chi += sign * hit
            bad |= ng
        return chi, bad

    def kernel(rng: np.random.Generator, count: int) -> np.ndarray:
        s = s2 = blocks = zeros = rejected = 0.0
        sizes = list(chunked(count, OFFSETS_PER_DIRECTION))
        frames = sample_frames(i, n, len(sizes), rng)
        for W, m in zip(frames, sizes):
            testers = [(1.0 if len(S) % 2 else -1.0, _SliceTester(Q, W)) for S, Q in nerve]
            chi, bad = slice_chi(testers, W, m, rng)
            while bad.any():
                rejected += int(bad.sum())
                _check_nongeneric(rejected, count, "lk_via_slices_mc")
                idx = np.flatnonzero(bad)
                chi[idx], bad_new = slice_chi(testers, W, idx.size, rng)
                bad[:] = False
                bad[idx] = bad_new
            mean = float(chi.mean())
            s += mean
            s2 += mean * mean
            blocks += 1
            zeros += float(np.count_nonzero(chi == 0))
        return np.array([s, s2, blocks, zeros, rejected])

    with PerformanceTracker(logger, "lk_via_slices_mc") as perf:
        s, s2, blocks, zeros, rejected = sum_shards(run_sharded(kernel, samples, seed, workers))
        _check_nongeneric(int(rejected), samples, "lk_via_slices_mc")
        mean = s / blocks
        var = max(s2 / blocks - mean * mean, 0.0)
        perf.add_metric("directions", int(blocks))
        perf.add_metric("resampled", int(rejected))
    metrics.increment("samples_drawn", samples)
    metrics.increment("samples_resampled", int(rejected))
    stderr = scale * float(np.sqrt(var / max(blocks - 1, 1)))
    return SliceStatistics(scale * mean, stderr, samples, zeros / samples, int(rejected))
