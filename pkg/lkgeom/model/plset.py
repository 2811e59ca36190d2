"""
Finite unions of convex polytopes.

Every quantity on a union goes through the nerve: the table of nonempty
intersections of piece subsets, each of which is again a convex polytope.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from lkgeom.adapter.error.error import ValidationError
from lkgeom.model.polytope import Polytope, intersect
from lkgeom.utils.logger import get_logger

logger = get_logger(__name__)

NerveTable = Dict[FrozenSet[int], Polytope]


@dataclass(eq=False)
class PLSet:
    ambient_dim: int
    pieces: Tuple[Polytope, ...]
    _nerve: Optional[NerveTable] = field(default=None, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        self.pieces = tuple(self.pieces)
        for p in self.pieces:
            if p.ambient_dim != self.ambient_dim:
                raise ValidationError(
                    f"Piece in R^{p.ambient_dim} inside a set in R^{self.ambient_dim}", error_code="BAD_DIMENSION"
                )

    @classmethod
    def of(cls, pieces: Sequence[Polytope]) -> "PLSet":
        if not pieces:
            raise ValidationError("Use PLSet.empty(n) for an empty set", error_code="EMPTY_PLSET")
        return cls(pieces[0].ambient_dim, tuple(pieces))

    @classmethod
    def empty(cls, n: int) -> "PLSet":
        return cls(n, ())

    @property
    def is_empty(self) -> bool:
        return not self.pieces

    @property
    def dim(self) -> int:
        return max((p.dim for p in self.pieces), default=-1)

    @property
    def is_pure(self) -> bool:
        return len({p.dim for p in self.pieces}) <= 1

    def nerve(self) -> NerveTable:
        """Nonempty intersections of piece subsets, keyed by the subset."""
        if self._nerve is not None:
            return self._nerve
        with self._lock:
            if self._nerve is None:
                self._nerve = _build_nerve(self.pieces)
                logger.debug_data("nerve built", pieces=len(self.pieces), simplices=len(self._nerve))
        return self._nerve

    def intersection(self, subset: Iterable[int]) -> Optional[Polytope]:
        return self.nerve().get(frozenset(subset))

    def union(self, other: "PLSet") -> "PLSet":
        _same_space(self, other)
        return PLSet(self.ambient_dim, self.pieces + other.pieces)

    def meet(self, other: "PLSet") -> "PLSet":
        """X ∩ Y as the union of pairwise piece intersections."""
        _same_space(self, other)
        parts: List[Polytope] = []
        for p in self.pieces:
            for q in other.pieces:
                r = intersect(p, q)
                if r is not None:
                    parts.append(r)
        return PLSet(self.ambient_dim, tuple(parts))

    def bounding_box(self) -> Tuple[np.ndarray, np.ndarray]:
        if self.is_empty:
            z = np.zeros(self.ambient_dim)
            return z, z
        los, his = zip(*(p.bounding_box() for p in self.pieces))
        return np.min(los, axis=0), np.max(his, axis=0)

    def distance(self, x) -> np.ndarray:
        X = np.atleast_2d(np.asarray(x, dtype=float))
        if self.is_empty:
            return np.full(X.shape[0], np.inf)
        return np.min(np.vstack([p.distance(X) for p in self.pieces]), axis=0)

    def contains(self, x) -> np.ndarray:
        X = np.atleast_2d(np.asarray(x, dtype=float))
        if self.is_empty:
            return np.zeros(X.shape[0], dtype=bool)
        return np.any(np.vstack([p.contains(X) for p in self.pieces]), axis=0)

    def euler_characteristic(self) -> int:
        return sum((-1) ** (len(S) + 1) for S in self.nerve())

    def chi_ball_many(self, x, eps: float) -> np.ndarray:
        """chi(X ∩ closed ball(x, eps)) for each row of x, by inclusion-exclusion over the nerve."""
        X = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.zeros(X.shape[0], dtype=np.int64)
        for S, Q in self.nerve().items():
            sign = 1 if len(S) % 2 else -1
            out += sign * (Q.distance(X) <= eps + 1e-12).astype(np.int64)
        return out

    def transformed(self, rotation, translation) -> "PLSet":
        return PLSet(self.ambient_dim, tuple(p.transformed(rotation, translation) for p in self.pieces))

    def scaled(self, factor: float) -> "PLSet":
        return PLSet(self.ambient_dim, tuple(p.scaled(factor) for p in self.pieces))


def _same_space(a: PLSet, b: PLSet) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise ValidationError("Sets live in different ambient spaces", error_code="BAD_DIMENSION")


def _build_nerve(pieces: Sequence[Polytope]) -> NerveTable:
    # subsets are grown by appending larger indices; an empty meet prunes all supersets
    table: NerveTable = {}
    frontier: List[Tuple[FrozenSet[int], int, Polytope]] = []
    for j, p in enumerate(pieces):
        key = frozenset({j})
        table[key] = p
        frontier.append((key, j, p))
    while frontier:
        nxt = []
        for S, last, Q in frontier:
            for j in range(last + 1, len(pieces)):
                R = intersect(Q, pieces[j])
                if R is None:
                    continue
                key = S | {j}
                table[key] = R
                nxt.append((key, j, R))
        frontier = nxt
    return table
