"""
Polyhedral cones with vertex at the origin, conic germs and affine flats.

A cone is stored as lineality space + extreme rays (unit vectors orthogonal to the
lineality) + outward facet normals inside its linear span, so both membership
tests and face enumeration are available whichever way the cone was given.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import nnls

from lkgeom.adapter.error.error import ValidationError
from lkgeom.conf import ANGLE_MC_SAMPLES, GEOM_TOL, MAX_AMBIENT_DIM, ORTHO_TOL
from lkgeom.model.linalg import close_under_intersection, complement_basis, dedup_rows, facets_containing, span_basis


@dataclass(frozen=True)
class ConeFace:
    ray_ids: FrozenSet[int]
    dim: int
    facet_ids: Tuple[int, ...]


def _in_cone(x: np.ndarray, rays: np.ndarray, lin: np.ndarray, tol: float = GEOM_TOL) -> bool:
    """x in cone(rays) + span(lin) by a nonnegative least-squares residual."""
    if lin.shape[1]:
        x = x - lin @ (lin.T @ x)
        rays = rays - (rays @ lin) @ lin.T if rays.shape[0] else rays
    scale = tol * max(1.0, float(np.linalg.norm(x)))
    if rays.shape[0] == 0:
        return float(np.linalg.norm(x)) <= scale
    _, resid = nnls(rays.T, x)
    return resid <= scale


@dataclass(frozen=True, eq=False)
class Cone:
    ambient_dim: int
    rays: np.ndarray
    lineality: np.ndarray
    span: np.ndarray
    pointed_basis: np.ndarray
    facet_normals: np.ndarray
    facets: Tuple[FrozenSet[int], ...]
    faces: Dict[int, Tuple[ConeFace, ...]]
    representation: str = "generators"

    # --- construction -------------------------------------------------

    @classmethod
    def from_generators(
        cls, generators, lineality=None, representation: str = "generators", ambient_dim: Optional[int] = None
    ) -> "Cone":
        G = _rows(generators)
        n = ambient_dim or max(G.shape[1], _rows(lineality).shape[1])
        if n < 1 or n > MAX_AMBIENT_DIM:
            raise ValidationError(f"Cone ambient dimension {n} outside 1..{MAX_AMBIENT_DIM}", error_code="BAD_DIMENSION")
        G = G.reshape(-1, n)
        if not np.all(np.isfinite(G)):
            raise ValidationError("Cone generators must be finite", error_code="NON_FINITE")
        L0 = _rows(lineality).reshape(-1, n) if _rows(lineality).size else np.zeros((0, n))
        lin = span_basis(L0) if L0.shape[0] else np.zeros((n, 0))

        norms = np.linalg.norm(G, axis=1)
        G = G[norms > GEOM_TOL]
        G = G / np.linalg.norm(G, axis=1)[:, None] if G.shape[0] else G

        two_sided = [g for g in G if _in_cone(-g, G, lin)]
        if two_sided:
            lin = span_basis(np.vstack([lin.T] + [np.atleast_2d(g) for g in two_sided]))

        if G.shape[0] and lin.shape[1]:
            G = G - (G @ lin) @ lin.T
        if G.shape[0]:
            keep = np.linalg.norm(G, axis=1) > GEOM_TOL
            G = G[keep]
            G = G / np.linalg.norm(G, axis=1)[:, None]
            G = dedup_rows(G, tol=1e-9)
        extreme = [
            i for i in range(G.shape[0]) if not _in_cone(G[i], np.delete(G, i, axis=0), lin)
        ]
        rays = G[extreme] if G.shape[0] else np.zeros((0, n))

        Q = span_basis(rays) if rays.shape[0] else np.zeros((n, 0))
        span = np.hstack([lin, Q])
        normals_q, facets = _pointed_facets(rays @ Q if Q.shape[1] else np.zeros((rays.shape[0], 0)))
        facet_normals = normals_q @ Q.T if len(facets) else np.zeros((0, n))

        l = lin.shape[1]
        sets = close_under_intersection(list(facets), frozenset(range(rays.shape[0])), keep_empty=True)
        by_dim: Dict[int, List[ConeFace]] = {}
        for s in sets:
            r = span_basis(rays[sorted(s)]).shape[1] if s else 0
            top = s == frozenset(range(rays.shape[0]))
            face = ConeFace(s, l + r, () if top else facets_containing(s, facets))
            by_dim.setdefault(l + r, []).append(face)
        return cls(
            ambient_dim=n,
            rays=rays,
            lineality=lin,
            span=span,
            pointed_basis=Q,
            facet_normals=facet_normals,
            facets=tuple(facets),
            faces={d: tuple(v) for d, v in sorted(by_dim.items())},
            representation=representation,
        )

    @classmethod
    def from_normals(cls, normals, ambient_dim: Optional[int] = None) -> "Cone":
        """Cone {x : a . x <= 0 for every row a}."""
        A = _rows(normals)
        n = A.shape[1] if A.shape[0] else ambient_dim
        if n is None:
            raise ValidationError("Cone given by no normals needs an ambient dimension", error_code="BAD_DIMENSION")
        A = A.reshape(-1, n)
        row_space = span_basis(A) if A.shape[0] else np.zeros((n, 0))
        lin = complement_basis(row_space, n)
        d = row_space.shape[1]
        Ap = A @ row_space if d else np.zeros((A.shape[0], 0))
        scale = GEOM_TOL * max(1.0, float(np.max(np.abs(A)))) if A.size else GEOM_TOL
        rays: List[np.ndarray] = []
        if d == 0:
            candidates = []
        elif d == 1:
            candidates = [np.array([1.0]), np.array([-1.0])]
        else:
            candidates = []
            for S in combinations(range(Ap.shape[0]), d - 1):
                sub = Ap[list(S)]
                ns = complement_basis(span_basis(sub), d)
                if ns.shape[1] == 1:
                    candidates += [ns[:, 0], -ns[:, 0]]
        for r in candidates:
            if np.all(Ap @ r <= scale * 10):
                rays.append(row_space @ r)
        gens = dedup_rows(np.vstack(rays)) if rays else np.zeros((0, n))
        return cls.from_generators(gens, lin.T if lin.shape[1] else None, representation="normals", ambient_dim=n)

    @classmethod
    def zero(cls, n: int) -> "Cone":
        return cls.from_generators(np.zeros((0, n)), None, ambient_dim=n)

    @classmethod
    def full(cls, n: int) -> "Cone":
        return cls.from_generators(np.zeros((0, n)), np.eye(n), ambient_dim=n)

    # --- structure ----------------------------------------------------

    @property
    def dim(self) -> int:
        return self.span.shape[1]

    @property
    def lineality_dim(self) -> int:
        return self.lineality.shape[1]

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @cached_property
    def orth_complement(self) -> np.ndarray:
        return complement_basis(self.span, self.ambient_dim)

    @cached_property
    def halfspace_normals(self) -> np.ndarray:
        """Rows a with C = {a . x <= 0}, span equalities included as opposite pairs."""
        rows = [self.facet_normals]
        W = self.orth_complement
        if W.shape[1]:
            rows += [W.T, -W.T]
        return np.vstack(rows) if rows else np.zeros((0, self.ambient_dim))

    def all_faces(self) -> List[ConeFace]:
        return [f for d in sorted(self.faces) for f in self.faces[d]]

    @property
    def top(self) -> ConeFace:
        return self.faces[self.dim][0]

    def face_cone(self, face: ConeFace) -> "Cone":
        return Cone.from_generators(
            self.rays[sorted(face.ray_ids)], self.lineality.T if self.lineality_dim else None, ambient_dim=self.ambient_dim
        )

    def normal_cone_at(self, face: ConeFace) -> "Cone":
        """Outward normals of the facets containing ``face`` plus the complement of the span."""
        W = self.orth_complement
        gens = self.facet_normals[list(face.facet_ids)] if face.facet_ids else np.zeros((0, self.ambient_dim))
        return Cone.from_generators(gens, W.T if W.shape[1] else None, ambient_dim=self.ambient_dim)

    def generators(self) -> np.ndarray:
        """Generators of the cone as a plain R_+-span (lineality as +/- pairs)."""
        L = self.lineality.T
        return np.vstack([self.rays, L, -L]) if L.shape[0] else self.rays

    def project(self, frame: np.ndarray) -> "Cone":
        """Image under the orthogonal projection onto span(frame columns), in frame coordinates."""
        gens = self.rays @ frame
        lin = self.lineality.T @ frame if self.lineality_dim else None
        return Cone.from_generators(gens, lin, ambient_dim=frame.shape[1])

    # --- membership ---------------------------------------------------

    def contains(self, x, tol: float = GEOM_TOL) -> bool:
        x = np.asarray(x, dtype=float).reshape(self.ambient_dim)
        return _in_cone(x, self.rays, self.lineality, tol)

    def contains_many(self, X, tol: float = GEOM_TOL) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        scale = tol * np.maximum(1.0, np.linalg.norm(X, axis=1))
        A = self.halfspace_normals
        if A.shape[0] == 0:
            return np.ones(X.shape[0], dtype=bool)
        return np.all(X @ A.T <= scale[:, None], axis=1)

    # --- measure ------------------------------------------------------

    def solid_fraction(self, rng: Optional[np.random.Generator] = None, samples: int = ANGLE_MC_SAMPLES) -> Tuple[float, float]:
        """
        Fraction of the unit sphere of span(C) lying in C, with its standard error.

        Exact for pointed parts of dimension <= 3, Monte Carlo above.
        """
        q = self.pointed_basis.shape[1]
        if q == 0:
            return 1.0, 0.0
        if q == 1:
            return 0.5, 0.0
        R = self.rays @ self.pointed_basis
        if q == 2:
            cosang = float(np.clip(R[0] @ R[1], -1.0, 1.0))
            return float(np.arccos(cosang) / (2 * np.pi)), 0.0
        if q == 3:
            return solid_angle_3d(R) / (4 * np.pi), 0.0
        rng = rng or np.random.default_rng(0)
        Z = rng.standard_normal((int(samples), q))
        A = self.facet_normals @ self.pointed_basis
        inside = np.all(Z @ A.T <= 0.0, axis=1)
        p = float(inside.mean())
        return p, float(np.sqrt(max(p * (1 - p), 0.0) / samples))


def solid_angle_3d(rays: np.ndarray) -> float:
    """Solid angle of a pointed 3D cone given by its extreme rays (fan of spherical triangles)."""
    R = rays / np.linalg.norm(rays, axis=1)[:, None]
    c = R.sum(axis=0)
    c /= np.linalg.norm(c)
    e1 = np.cross(c, [1.0, 0.0, 0.0])
    if np.linalg.norm(e1) < 1e-6:
        e1 = np.cross(c, [0.0, 1.0, 0.0])
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(c, e1)
    order = np.argsort(np.arctan2(R @ e2, R @ e1))
    R = R[order]
    total = 0.0
    a = R[0]
    for b, d in zip(R[1:-1], R[2:]):
        det = abs(float(np.dot(a, np.cross(b, d))))
        den = 1.0 + a @ b + a @ d + b @ d
        total += 2.0 * np.arctan2(det, den)
    return float(total)


def _pointed_facets(R: np.ndarray) -> Tuple[np.ndarray, List[FrozenSet[int]]]:
    """Outward unit normals and ray sets of the facets of the full-dimensional pointed cone spanned by R."""
    r, q = R.shape
    if q == 0:
        return np.zeros((0, 0)), []
    scale = GEOM_TOL * 100
    normals: List[np.ndarray] = []
    facets: List[FrozenSet[int]] = []
    for S in combinations(range(r), q - 1):
        sub = R[list(S)] if S else np.zeros((0, q))
        basis = span_basis(sub) if S else np.zeros((q, 0))
        if basis.shape[1] != q - 1:
            continue
        a = complement_basis(basis, q)[:, 0]
        side = R @ a
        if np.all(side <= scale):
            pass
        elif np.all(side >= -scale):
            a, side = -a, -side
        else:
            continue
        members = frozenset(np.flatnonzero(np.abs(side) <= scale).tolist())
        if members in facets:
            continue
        facets.append(members)
        normals.append(a)
    return (np.vstack(normals) if normals else np.zeros((0, q))), facets


def _rows(x) -> np.ndarray:
    if x is None:
        return np.zeros((0, 0))
    arr = np.asarray(x, dtype=float)
    if arr.size == 0:
        return arr.reshape(0, arr.shape[-1] if arr.ndim == 2 else 0)
    return np.atleast_2d(arr)


def intersect_cones(a: Cone, b: Cone) -> Cone:
    if a.ambient_dim != b.ambient_dim:
        raise ValidationError("Cones live in different ambient spaces", error_code="BAD_DIMENSION")
    return Cone.from_normals(np.vstack([a.halfspace_normals, b.halfspace_normals]), ambient_dim=a.ambient_dim)


@dataclass(frozen=True, eq=False)
class ConicGerm:
    """
    Finite union of polyhedral cones at 0, each with an integer multiplicity.

    The germ stands for the constructible function 1_union + sum (m - 1) * 1_C:
    a point counts once for lying in the union and once more for every extra
    unit of multiplicity of each cone through it. Overlapping cones of
    multiplicity 1 are therefore counted once, not once per cone.
    """

    ambient_dim: int
    pieces: Tuple[Tuple[Cone, int], ...]

    @property
    def dim(self) -> int:
        return max((c.dim for c, _ in self.pieces), default=-1)

    @property
    def cones(self) -> List[Cone]:
        return [c for c, _ in self.pieces]

    @property
    def is_pure(self) -> bool:
        return len({c.dim for c, _ in self.pieces}) <= 1

    @classmethod
    def of(cls, cones: Sequence[Cone], mults: Optional[Sequence[int]] = None) -> "ConicGerm":
        if not cones:
            raise ValidationError("A conic germ needs at least one cone", error_code="EMPTY_GERM")
        n = cones[0].ambient_dim
        if any(c.ambient_dim != n for c in cones):
            raise ValidationError("Germ pieces live in different ambient spaces", error_code="BAD_DIMENSION")
        mults = list(mults) if mults is not None else [1] * len(cones)
        if any(int(m) != m for m in mults):
            raise ValidationError("Multiplicities must be integers", error_code="BAD_MULTIPLICITY")
        return cls(n, tuple((c, int(m)) for c, m in zip(cones, mults)))

    def rotated(self, R: np.ndarray) -> "ConicGerm":
        out = []
        for c, m in self.pieces:
            lin = (R @ c.lineality).T if c.lineality_dim else None
            out.append((Cone.from_generators(c.rays @ R.T, lin, ambient_dim=self.ambient_dim), m))
        return ConicGerm(self.ambient_dim, tuple(out))


@dataclass(frozen=True, eq=False)
class AffineFlat:
    ambient_dim: int
    direction: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        D = np.atleast_2d(self.direction)
        if D.size and np.max(np.abs(D.T @ D - np.eye(D.shape[1]))) >= ORTHO_TOL:
            raise ValidationError("Flat direction frame is not orthonormal", error_code="NOT_ORTHONORMAL")

    @property
    def dim(self) -> int:
        return np.atleast_2d(self.direction).shape[1] if np.size(self.direction) else 0
