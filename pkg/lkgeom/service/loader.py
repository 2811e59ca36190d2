# lkgeom/service/loader.py
"""JSON ingestion: read, validate against a schema, convert to domain objects."""

import json
from pathlib import Path
from typing import Any, Dict, Type, TypeVar

import numpy as np
from pydantic import BaseModel
from pydantic import ValidationError as PydanticValidationError

from lkgeom.adapter.error.error import InputOutputError, ValidationError
from lkgeom.adapter.validate.validate import check_input_path
from lkgeom.model.cone import Cone, ConicGerm
from lkgeom.model.grothendieck import GrothendieckClass
from lkgeom.model.plset import PLSet
from lkgeom.model.polytope import Polytope, build_face_lattice
from lkgeom.model.resolution import Component, ResolutionData, ResolutionStratum
from lkgeom.model.results import ComplexGermData, Stratum
from lkgeom.model.schemas import (
    ComplexGermSchema,
    ConeSchema,
    GermSchema,
    OracleSchema,
    PLSetSchema,
    PolytopeSchema,
    ResolutionSchema,
)
from lkgeom.utils.logger import get_logger

logger = get_logger(__name__)

S = TypeVar("S", bound=BaseModel)

# Key that identifies a document type when no command pins the schema
_SIGNATURES = (
    ("pieces", PLSetSchema),
    ("vertices", PolytopeSchema),
    ("cones", GermSchema),
    ("components", ResolutionSchema),
    ("mu", ComplexGermSchema),
    ("f", OracleSchema),
)


def load_json(path: str) -> Any:
    p = check_input_path(path)
    try:
        text = Path(p).read_text(encoding="utf-8")
    except OSError as e:
        raise InputOutputError(f"Cannot read {path}: {e}", error_code="READ_FAILED") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path} is not valid JSON: {e.msg} (line {e.lineno})", error_code="MALFORMED_JSON") from e


def parse(schema: Type[S], data: Any) -> S:
    try:
        return schema.model_validate(data)
    except PydanticValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(x) for x in first.get("loc", ())) or "<root>"
        raise ValidationError(
            f"{schema.__name__}: {where}: {first.get('msg')} ({e.error_count()} error(s))",
            error_code="SCHEMA_MISMATCH",
        ) from e


def detect_schema(data: Any) -> Type[BaseModel]:
    if isinstance(data, dict):
        for key, schema in _SIGNATURES:
            if key in data:
                return schema
    raise ValidationError("Cannot tell which kind of document this is", error_code="UNKNOWN_DOCUMENT")


# --- converters -----------------------------------------------------------


def to_polytope(doc: PolytopeSchema) -> Polytope:
    V = np.asarray(doc.vertices, dtype=float).reshape(-1, doc.dim)
    if doc.facets is None:
        return Polytope.from_vertices(V)
    return build_face_lattice(V, doc.facets)


def to_plset(doc) -> PLSet:
    if isinstance(doc, PolytopeSchema):
        return PLSet.of([to_polytope(doc)])
    if not doc.pieces:
        return PLSet.empty(doc.dim)
    return PLSet.of([to_polytope(p) for p in doc.pieces])


def to_cone(doc: ConeSchema, dim: int) -> Cone:
    if doc.dim is not None and doc.dim != dim:
        raise ValidationError(f"Cone dimension {doc.dim} differs from germ dimension {dim}", error_code="BAD_DIMENSION")
    if doc.normals is not None:
        return Cone.from_normals(np.asarray(doc.normals, dtype=float).reshape(-1, dim), ambient_dim=dim)
    gens = np.asarray(doc.generators, dtype=float).reshape(-1, dim)
    lin = np.asarray(doc.lineality, dtype=float).reshape(-1, dim) if doc.lineality else None
    return Cone.from_generators(gens, lin, ambient_dim=dim)


def to_germ(doc: GermSchema) -> ConicGerm:
    return ConicGerm.of([to_cone(c, doc.dim) for c in doc.cones], [c.mult for c in doc.cones])


def to_complex_germ(doc: ComplexGermSchema) -> ComplexGermData:
    strata = tuple(Stratum(s.id, s.dim, tuple(s.closure_of), tuple(s.sigma_tilde)) for s in doc.strata)
    return ComplexGermData(tuple(doc.mu), tuple(doc.polar), strata, doc.dim)


def _classes(triples: Dict[str, list]) -> Dict[str, GrothendieckClass]:
    return {sign: GrothendieckClass.from_triples(t) for sign, t in triples.items()}


def to_resolution(doc: ResolutionSchema) -> ResolutionData:
    comps = tuple(Component(c.id, c.N, c.nu, c.exceptional) for c in doc.components)
    strata = tuple(
        ResolutionStratum(
            ids=tuple(s.I),
            chi=s.chi,
            klass=GrothendieckClass.from_triples(s.klass) if s.klass is not None else None,
            signed=_classes(s.class_signed or {}),
            chi_signed=dict(s.chi_signed or {}),
        )
        for s in doc.strata
    )
    monomial = tuple(doc.monomial) if doc.monomial is not None else None
    return ResolutionData(doc.n, comps, strata, monomial, doc.polynomial, doc.name)


def load_document(path: str, schema: Type[S] = None):
    """(schema instance, domain object) for a JSON file; the schema is detected when not given."""
    data = load_json(path)
    if schema is None:
        schema = detect_schema(data)
    if schema is PLSetSchema and isinstance(data, dict) and "vertices" in data and "pieces" not in data:
        schema = PolytopeSchema
    doc = parse(schema, data)
    logger.debug_data("document loaded", path=str(path), schema=schema.__name__)
    return doc, _CONVERTERS[type(doc)](doc)


_CONVERTERS = {
    PolytopeSchema: to_plset,
    PLSetSchema: to_plset,
    GermSchema: to_germ,
    ComplexGermSchema: to_complex_germ,
    ResolutionSchema: to_resolution,
    OracleSchema: lambda doc: doc,
}
