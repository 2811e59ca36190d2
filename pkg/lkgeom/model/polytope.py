"""
Convex polytopes with an explicit face lattice.

A ``Polytope`` keeps its vertex list, every face as a vertex-index set with its
affine dimension, the facet incidence of every face and an H-representation in
R^n (relative facets plus the equalities cutting out the affine hull).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from lkgeom.adapter.error.error import ValidationError
from lkgeom.conf import GEOM_TOL, MAX_AMBIENT_DIM
from lkgeom.model.cone import Cone
from lkgeom.model.linalg import (
    affine_frame,
    close_under_intersection,
    complement_basis,
    dedup_rows,
    facets_containing,
)
from lkgeom.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class Face:
    vertex_ids: FrozenSet[int]
    dim: int
    facet_ids: Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Polytope:
    ambient_dim: int
    vertices: np.ndarray
    dim: int
    facets: Tuple[FrozenSet[int], ...]
    faces: Dict[int, Tuple[Face, ...]]
    facet_normals: np.ndarray
    facet_offsets: np.ndarray
    origin: np.ndarray
    hull_basis: np.ndarray
    comp_basis: np.ndarray
    _index: Dict[FrozenSet[int], Face] = field(repr=False, default_factory=dict)

    # --- construction -------------------------------------------------

    @classmethod
    def from_vertices(cls, points) -> "Polytope":
        """Convex hull of a point cloud; non-extreme and duplicate points are dropped."""
        pts = _as_points(points)
        pts = dedup_rows(pts, tol=GEOM_TOL * 100)
        origin, U = affine_frame(pts)
        k = U.shape[1]
        Y = (pts - origin) @ U
        if k == 0:
            keep = [0]
        elif k == 1:
            keep = sorted({int(np.argmin(Y[:, 0])), int(np.argmax(Y[:, 0]))})
        else:
            keep = sorted(int(i) for i in _hull(Y).vertices)
        return build_face_lattice(pts[keep], None)

    @classmethod
    def from_halfspaces(cls, A, b, tol: float = GEOM_TOL) -> Optional["Polytope"]:
        """Bounded {x : A x <= b}; None when empty."""
        pts = enumerate_vertices(np.asarray(A, dtype=float), np.asarray(b, dtype=float), tol)
        if pts.shape[0] == 0:
            return None
        return cls.from_vertices(pts)

    # --- lattice access -----------------------------------------------

    @property
    def top(self) -> Face:
        return self.faces[self.dim][0]

    def all_faces(self) -> List[Face]:
        return [f for d in sorted(self.faces) for f in self.faces[d]]

    def find_face(self, vertex_ids) -> Face:
        key = frozenset(int(i) for i in vertex_ids)
        face = self._index.get(key)
        if face is None:
            raise ValidationError(f"{sorted(key)} is not a face of the polytope", error_code="FACE_NOT_IN_LATTICE")
        return face

    def subfaces(self, face: Face) -> List[Face]:
        """Faces of ``face`` one dimension down."""
        if face.dim == 0:
            return []
        return [g for g in self.faces.get(face.dim - 1, ()) if g.vertex_ids < face.vertex_ids]

    def incidence(self, face: Face) -> Tuple[int, ...]:
        return face.facet_ids

    def face_count(self) -> Dict[int, int]:
        return {d: len(fs) for d, fs in self.faces.items()}

    def euler_relation(self) -> int:
        return sum((-1) ** d * len(fs) for d, fs in self.faces.items())

    # --- metric queries -----------------------------------------------

    @cached_property
    def halfspaces(self) -> Tuple[np.ndarray, np.ndarray]:
        """(A, b) with P = {A x <= b}; affine-hull equalities appear as opposite pairs."""
        rows = [self.facet_normals]
        offs = [self.facet_offsets]
        if self.comp_basis.shape[1]:
            W = self.comp_basis.T
            c = W @ self.origin
            rows += [W, -W]
            offs += [c, -c]
        return np.vstack(rows), np.concatenate(offs)

    def contains(self, x, tol: float = GEOM_TOL) -> np.ndarray:
        X = np.atleast_2d(np.asarray(x, dtype=float))
        A, b = self.halfspaces
        scale = tol * max(1.0, self.diameter)
        return np.all(X @ A.T <= b + scale, axis=1)

    @cached_property
    def diameter(self) -> float:
        v = self.vertices
        if v.shape[0] < 2:
            return 0.0
        return float(np.max(np.linalg.norm(v[:, None, :] - v[None, :, :], axis=-1)))

    @cached_property
    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    @cached_property
    def _face_frames(self) -> List[Tuple[np.ndarray, np.ndarray]]:
        frames = []
        for f in self.all_faces():
            pts = self.vertices[sorted(f.vertex_ids)]
            frames.append(affine_frame(pts))
        return frames

    def distance(self, x) -> np.ndarray:
        """Exact Euclidean distance from each row of x to P."""
        X = np.atleast_2d(np.asarray(x, dtype=float))
        best = np.full(X.shape[0], np.inf)
        for origin, B in self._face_frames:
            d = X - origin
            proj = origin + (d @ B) @ B.T if B.shape[1] else np.broadcast_to(origin, X.shape)
            inside = self.contains(proj, tol=1e-7)
            dist = np.linalg.norm(X - proj, axis=1)
            best = np.where(inside & (dist < best), dist, best)
        return best

    @cached_property
    def face_volumes(self) -> Dict[FrozenSet[int], float]:
        """Vol_i of every i-face by pyramid decomposition from the face centroid."""
        vols: Dict[FrozenSet[int], float] = {}
        for d in sorted(self.faces):
            for f in self.faces[d]:
                if d == 0:
                    vols[f.vertex_ids] = 1.0
                    continue
                subs = self.subfaces(f)
                if not subs:
                    raise ValidationError(
                        f"Face {sorted(f.vertex_ids)} of dimension {d} has no facets", error_code="DEGENERATE_FACE"
                    )
                c = self.vertices[sorted(f.vertex_ids)].mean(axis=0)
                total = 0.0
                for g in subs:
                    o, B = affine_frame(self.vertices[sorted(g.vertex_ids)])
                    if B.shape[1] != d - 1:
                        raise ValidationError(
                            f"Face {sorted(g.vertex_ids)} spans {B.shape[1]} dimensions, expected {d - 1}",
                            error_code="DEGENERATE_FACE",
                        )
                    r = c - o
                    h = float(np.linalg.norm(r - B @ (B.T @ r)))
                    total += h * vols[g.vertex_ids] / d
                vols[f.vertex_ids] = total
        return vols

    def face_volume(self, face: Face) -> float:
        return self.face_volumes[face.vertex_ids]

    @property
    def volume(self) -> float:
        return self.face_volumes[self.top.vertex_ids]

    def bounding_box(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    # --- transforms ---------------------------------------------------

    def transformed(self, rotation, translation) -> "Polytope":
        R = np.asarray(rotation, dtype=float)
        t = np.asarray(translation, dtype=float)
        return build_face_lattice(self.vertices @ R.T + t, [sorted(f) for f in self.facets] or None)

    def scaled(self, factor: float) -> "Polytope":
        return build_face_lattice(self.vertices * float(factor), [sorted(f) for f in self.facets] or None)


def _as_points(points) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        raise ValidationError("Polytope needs at least one vertex", error_code="EMPTY_POLYTOPE")
    if not np.all(np.isfinite(pts)):
        raise ValidationError("Polytope vertices must be finite", error_code="NON_FINITE")
    n = pts.shape[1]
    if n < 1 or n > MAX_AMBIENT_DIM:
        raise ValidationError(f"Ambient dimension {n} outside 1..{MAX_AMBIENT_DIM}", error_code="BAD_DIMENSION")
    return pts


def _hull(Y: np.ndarray) -> ConvexHull:
    try:
        return ConvexHull(Y)
    except QhullError as e:
        raise ValidationError(f"Convex hull failed: {e}", error_code="HULL_FAILED") from e


def _relative_facets(Y: np.ndarray) -> List[Tuple[FrozenSet[int], np.ndarray, float]]:
    """Facets of a full-dimensional point set in R^k as (vertex set, unit normal, offset)."""
    k = Y.shape[1]
    scale = max(1.0, float(np.max(np.abs(Y))))
    tol = GEOM_TOL * scale * 100
    if k == 1:
        lo, hi = float(Y[:, 0].min()), float(Y[:, 0].max())
        return [
            (frozenset(np.flatnonzero(np.abs(Y[:, 0] - lo) <= tol).tolist()), np.array([-1.0]), -lo),
            (frozenset(np.flatnonzero(np.abs(Y[:, 0] - hi) <= tol).tolist()), np.array([1.0]), hi),
        ]
    hull = _hull(Y)
    out: List[Tuple[FrozenSet[int], np.ndarray, float]] = []
    for eq in hull.equations:
        normal, offset = eq[:-1], -eq[-1]
        if any(np.linalg.norm(normal - m) < 1e-7 and abs(offset - o) < 1e-7 * scale for _, m, o in out):
            continue
        members = frozenset(np.flatnonzero(np.abs(Y @ normal - offset) <= tol).tolist())
        out.append((members, normal, offset))
    return out


def _facet_from_subset(Y: np.ndarray, subset: Sequence[int]) -> Tuple[FrozenSet[int], np.ndarray, float]:
    """Supporting hyperplane through a declared facet; raises when it does not support the hull."""
    k = Y.shape[1]
    pts = Y[list(subset)]
    o, B = affine_frame(pts)
    if B.shape[1] != k - 1:
        raise ValidationError(
            f"Facet {sorted(subset)} spans dimension {B.shape[1]}, expected {k - 1}", error_code="BAD_FACET"
        )
    normal = complement_basis(B, k)[:, 0]
    side = (Y - o) @ normal
    scale = max(1.0, float(np.max(np.abs(Y))))
    tol = GEOM_TOL * scale * 100
    if np.all(side <= tol):
        pass
    elif np.all(side >= -tol):
        normal, side = -normal, -side
    else:
        raise ValidationError(f"Facet {sorted(subset)} does not support the hull", error_code="BAD_FACET")
    members = frozenset(np.flatnonzero(np.abs(side) <= tol).tolist())
    return members, normal, float(normal @ o)


def build_face_lattice(vertices, facet_descriptions: Optional[Sequence[Sequence[int]]] = None) -> Polytope:
    """
    Build the full face lattice of conv(vertices).

    ``facet_descriptions`` lists facets as vertex-index subsets. Declared facets are
    checked against the hull; when omitted, facets come from the hull itself.
    Faces are all nonempty intersections of facets, plus the polytope itself.
    """
    V = _as_points(vertices)
    m, n = V.shape
    origin, U = affine_frame(V)
    k = U.shape[1]
    W = complement_basis(U, n)
    Y = (V - origin) @ U

    if k == 0:
        if m != 1:
            raise ValidationError("Repeated vertices in a zero-dimensional polytope", error_code="DUPLICATE_VERTEX")
        top = Face(frozenset({0}), 0, ())
        return Polytope(
            ambient_dim=n,
            vertices=V,
            dim=0,
            facets=(),
            faces={0: (top,)},
            facet_normals=np.zeros((0, n)),
            facet_offsets=np.zeros(0),
            origin=origin,
            hull_basis=U,
            comp_basis=W,
            _index={top.vertex_ids: top},
        )

    hull_facets = _relative_facets(Y)
    if facet_descriptions:
        declared = [_facet_from_subset(Y, s) for s in facet_descriptions]
        hull_sets = {f for f, _, _ in hull_facets}
        declared_sets = {f for f, _, _ in declared}
        missing = hull_sets - declared_sets
        if missing:
            raise ValidationError(
                f"Facet list incomplete: {len(missing)} hull facet(s) not declared", error_code="BAD_FACET"
            )
        if declared_sets - hull_sets:
            raise ValidationError("Declared facet is not a facet of the hull", error_code="BAD_FACET")
        hull_facets = declared

    facet_sets = tuple(f for f, _, _ in hull_facets)
    normals_rel = np.vstack([nm for _, nm, _ in hull_facets])
    offsets_rel = np.array([o for _, _, o in hull_facets])
    normals = normals_rel @ U.T
    offsets = offsets_rel + normals @ origin

    all_ids = frozenset(range(m))
    sets = close_under_intersection(facet_sets, all_ids, keep_empty=False)
    index: Dict[FrozenSet[int], Face] = {}
    by_dim: Dict[int, List[Face]] = {}
    for s in sets:
        dim = affine_frame(V[sorted(s)])[1].shape[1]
        face = Face(s, dim, () if s == all_ids else facets_containing(s, facet_sets))
        index[s] = face
        by_dim.setdefault(dim, []).append(face)

    zero_faces = {next(iter(f.vertex_ids)) for f in by_dim.get(0, [])}
    if zero_faces != set(range(m)):
        raise ValidationError(
            f"Points {sorted(set(range(m)) - zero_faces)} are not vertices of the hull", error_code="NOT_A_VERTEX"
        )
    if len(by_dim.get(k, [])) != 1:
        raise ValidationError("Face lattice has more than one top face", error_code="BAD_LATTICE")

    poly = Polytope(
        ambient_dim=n,
        vertices=V,
        dim=k,
        facets=facet_sets,
        faces={d: tuple(fs) for d, fs in sorted(by_dim.items())},
        facet_normals=normals,
        facet_offsets=offsets,
        origin=origin,
        hull_basis=U,
        comp_basis=W,
        _index=index,
    )
    logger.debug_data("face lattice built", ambient_dim=n, dim=k, counts=poly.face_count())
    return poly


def enumerate_vertices(A: np.ndarray, b: np.ndarray, tol: float = GEOM_TOL) -> np.ndarray:
    """Vertices of {A x <= b} by solving every n-subset of constraints (bounded input)."""
    mcon, n = A.shape
    if mcon < n:
        return np.zeros((0, n))
    subsets = np.array(list(combinations(range(mcon), n)), dtype=int)
    As = A[subsets]
    bs = b[subsets]
    dets = np.linalg.det(As)
    ok = np.abs(dets) > 1e-12
    if not np.any(ok):
        return np.zeros((0, n))
    xs = np.linalg.solve(As[ok], bs[ok][..., None])[..., 0]
    scale = max(1.0, float(np.max(np.abs(b))))
    feasible = np.all(xs @ A.T <= b + 1e-7 * scale, axis=1)
    return dedup_rows(xs[feasible], tol=1e-7 * scale)


def intersect(p: Polytope, q: Polytope) -> Optional[Polytope]:
    """P ∩ Q as a polytope, or None when empty."""
    if p.ambient_dim != q.ambient_dim:
        raise ValidationError("Cannot intersect polytopes of different ambient dimension", error_code="BAD_DIMENSION")
    lo = np.maximum(p.bounding_box()[0], q.bounding_box()[0])
    hi = np.minimum(p.bounding_box()[1], q.bounding_box()[1])
    if np.any(lo > hi + 1e-7):
        return None
    A1, b1 = p.halfspaces
    A2, b2 = q.halfspaces
    return Polytope.from_halfspaces(np.vstack([A1, A2]), np.concatenate([b1, b2]))


def box(lo, hi) -> Polytope:
    """Axis-aligned box; degenerate sides allowed."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    n = lo.size
    corners = np.array([[hi[j] if (mask >> j) & 1 else lo[j] for j in range(n)] for mask in range(2 ** n)])
    return Polytope.from_vertices(corners)


def simplex(n: int) -> Polytope:
    """conv(0, e_1, ..., e_n)."""
    return Polytope.from_vertices(np.vstack([np.zeros(n), np.eye(n)]))


def segment(a, b) -> Polytope:
    return Polytope.from_vertices(np.vstack([a, b]))


def point(x) -> Polytope:
    return build_face_lattice(np.atleast_2d(np.asarray(x, dtype=float)))


def normal_cone(P: Polytope, face: Face) -> Cone:
    """
    Outward normal cone of P along ``face``.

    Generated by the normals of the facets containing the face, times the
    orthogonal complement of the affine hull; the zero cone for F = P full-dimensional.
    """
    if P._index.get(face.vertex_ids) is None:
        raise ValidationError(f"{sorted(face.vertex_ids)} is not a face of the polytope", error_code="FACE_NOT_IN_LATTICE")
    gens = P.facet_normals[list(face.facet_ids)] if face.facet_ids else np.zeros((0, P.ambient_dim))
    lin = P.comp_basis.T if P.comp_basis.shape[1] else None
    return Cone.from_generators(gens, lin, ambient_dim=P.ambient_dim)
