"""Small linear-algebra helpers shared by polytopes and cones."""

from typing import FrozenSet, List, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space, orth

from lkgeom.conf import GEOM_TOL


def rank_tol(scale: float) -> float:
    return GEOM_TOL * max(1.0, scale)


def span_basis(vectors: np.ndarray, tol: float = GEOM_TOL) -> np.ndarray:
    """Orthonormal basis (n x r) of the row span of ``vectors``."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    n = vectors.shape[1]
    if vectors.shape[0] == 0 or not np.any(np.abs(vectors) > tol):
        return np.zeros((n, 0))
    scale = float(np.max(np.abs(vectors)))
    return orth(vectors.T, rcond=rank_tol(scale) / max(scale, 1e-300))


def complement_basis(basis: np.ndarray, n: int) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of span(basis columns) in R^n."""
    if basis.shape[1] == 0:
        return np.eye(n)
    if basis.shape[1] >= n:
        return np.zeros((n, 0))
    return null_space(basis.T)


def affine_frame(points: np.ndarray, tol: float = GEOM_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """(origin, U) with U an orthonormal basis of the direction of aff(points)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    origin = points[0]
    return origin, span_basis(points - origin, tol)


def dedup_rows(rows: np.ndarray, tol: float = 1e-7) -> np.ndarray:
    kept: List[np.ndarray] = []
    for r in np.atleast_2d(rows):
        if not any(np.linalg.norm(r - k) <= tol for k in kept):
            kept.append(r)
    if not kept:
        return np.zeros((0, np.atleast_2d(rows).shape[1]))
    return np.vstack(kept)


def close_under_intersection(
    facets: Sequence[FrozenSet[int]], top: FrozenSet[int], keep_empty: bool
) -> List[FrozenSet[int]]:
    """All intersections of facet sets, plus the top set."""
    seen = {top}
    frontier = [f for f in facets]
    for f in frontier:
        seen.add(f)
    while frontier:
        nxt = []
        for face in frontier:
            for facet in facets:
                meet = face & facet
                if not meet and not keep_empty:
                    continue
                if meet not in seen:
                    seen.add(meet)
                    nxt.append(meet)
        frontier = nxt
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


def facets_containing(face: FrozenSet[int], facets: Sequence[FrozenSet[int]]) -> Tuple[int, ...]:
    return tuple(j for j, f in enumerate(facets) if face <= f)
