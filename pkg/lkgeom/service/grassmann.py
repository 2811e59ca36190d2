# lkgeom/service/grassmann.py
from typing import Union

import numpy as np

from lkgeom.adapter.error.error import DomainError

SeedLike = Union[int, np.random.Generator, None]


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(0 if seed is None else seed)


def sample_grassmannian(k: int, n: int, seed: SeedLike = 0) -> np.ndarray:
    """
    Orthonormal n x k frame whose span is distributed by the invariant measure on G(k, n).

    QR of a Gaussian matrix, with the signs of R's diagonal folded into Q so the
    frame itself is Haar-distributed.
    """
    if not (0 <= k <= n):
        raise DomainError(f"sample_grassmannian needs 0 <= k <= n, got k={k}, n={n}")
    if k == 0:
        return np.zeros((n, 0))
    rng = _rng(seed)
    Q, R = np.linalg.qr(rng.standard_normal((n, k)))
    return Q * np.sign(np.where(np.diag(R) == 0, 1.0, np.diag(R)))


def sample_frames(k: int, n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Batch of ``count`` frames, shape (count, n, k)."""
    if not (0 <= k <= n):
        raise DomainError(f"sample_frames needs 0 <= k <= n, got k={k}, n={n}")
    if k == 0:
        return np.zeros((count, n, 0))
    Q, R = np.linalg.qr(rng.standard_normal((count, n, k)))
    d = np.diagonal(R, axis1=1, axis2=2)
    return Q * np.sign(np.where(d == 0, 1.0, d))[:, None, :]


def complete_frame(U: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the complement of span(U) in R^n (n x (n-k))."""
    n, k = U.shape
    if k == n:
        return np.zeros((n, 0))
    full, _ = np.linalg.qr(np.hstack([U, np.eye(n)]), mode="complete")
    return full[:, k:n]


def complete_frames(U: np.ndarray) -> np.ndarray:
    """Batched ``complete_frame`` for U of shape (count, n, k)."""
    count, n, k = U.shape
    if k == n:
        return np.zeros((count, n, 0))
    eye = np.broadcast_to(np.eye(n), (count, n, n))
    full, _ = np.linalg.qr(np.concatenate([U, eye], axis=2), mode="complete")
    return full[:, :, k:n]


def random_rotation(n: int, seed: SeedLike = 0) -> np.ndarray:
    """Haar-distributed element of SO(n)."""
    Q = sample_grassmannian(n, n, seed)
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q
