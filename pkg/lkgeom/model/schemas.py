# lkgeom/model/schemas.py
"""
Input schemas for every JSON document the CLI reads.

Models are strict: an unknown field name is rejected, so a typo in a fixture
fails loudly instead of being ignored.
"""

from __future__ import annotations

from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

Vector = List[float]
ClassTriples = List[List[int]]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


# --- geometry -------------------------------------------------------------


class PolytopeSchema(_Strict):
    dim: int = Field(..., ge=1, le=6)
    vertices: List[Vector] = Field(..., min_length=1)
    facets: Optional[List[List[int]]] = None

    @model_validator(mode="after")
    def _check_shape(self):
        if any(len(v) != self.dim for v in self.vertices):
            raise ValueError(f"every vertex must have {self.dim} coordinates")
        if self.facets is not None:
            nv = len(self.vertices)
            if any(not f or min(f) < 0 or max(f) >= nv for f in self.facets):
                raise ValueError("facet vertex indices out of range")
        return self


class PLSetSchema(_Strict):
    dim: int = Field(..., ge=1, le=6)
    pieces: List[PolytopeSchema]

    @model_validator(mode="after")
    def _check_dims(self):
        if any(p.dim != self.dim for p in self.pieces):
            raise ValueError("every piece must live in the set's ambient dimension")
        return self


class ConeSchema(_Strict):
    dim: Optional[int] = Field(None, ge=1, le=6)
    generators: Optional[List[Vector]] = None
    normals: Optional[List[Vector]] = None
    lineality: Optional[List[Vector]] = None
    mult: int = 1

    @model_validator(mode="after")
    def _one_representation(self):
        if (self.generators is None) == (self.normals is None):
            raise ValueError("a cone needs exactly one of 'generators' or 'normals'")
        if self.normals is not None and self.lineality is not None:
            raise ValueError("'lineality' only applies to the generator representation")
        return self


class GermSchema(_Strict):
    dim: int = Field(..., ge=1, le=6)
    cones: List[ConeSchema] = Field(..., min_length=1)


# --- complex layer --------------------------------------------------------


class StratumSchema(_Strict):
    id: str
    dim: int = Field(..., ge=0)
    closure_of: List[str] = Field(default_factory=list)
    sigma_tilde: List[int] = Field(default_factory=list)


class ComplexGermSchema(_Strict):
    mu: List[int] = Field(..., min_length=1)
    polar: List[int] = Field(default_factory=list)
    strata: List[StratumSchema] = Field(default_factory=list)
    dim: Optional[int] = Field(None, ge=0)


# --- resolutions ----------------------------------------------------------


class ComponentSchema(_Strict):
    id: str
    N: int = Field(..., ge=1)
    nu: int = Field(..., ge=1)
    exceptional: bool = False


class ResolutionStratumSchema(_Strict):
    I: List[str] = Field(..., min_length=1)
    chi: Optional[int] = None
    klass: Optional[ClassTriples] = Field(None, alias="class")
    class_signed: Optional[Dict[str, ClassTriples]] = None
    chi_signed: Optional[Dict[str, int]] = None


class ResolutionSchema(_Strict):
    n: int = Field(..., ge=1)
    components: List[ComponentSchema] = Field(..., min_length=1)
    strata: List[ResolutionStratumSchema] = Field(default_factory=list)
    monomial: Optional[List[int]] = None
    polynomial: Optional[str] = None
    name: str = ""


class OracleSchema(_Strict):
    f: str
    question: str = "closed-fibre"
    sign: str = "+1"
    eps: float = Field(1e-2, gt=0)
    eta: float = Field(1.0, gt=0)


# --- run configuration ----------------------------------------------------


class Command(str, Enum):
    LK = "lk"
    TUBE = "tube"
    CROFTON = "crofton"
    LOCAL = "local"
    POLAR = "polar"
    MLCC_CHECK = "mlcc-check"
    ZETA = "zeta"
    ACAMPO = "acampo"
    MILNOR_FIBRE = "milnor-fibre"
    ORACLE = "oracle"
    COMPLEX = "complex"
    PLOTDATA = "plotdata"
    VALIDATE = "validate"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class RunConfig(_Strict):
    command: Command
    input_path: str
    out: Optional[str] = None
    samples: int = Field(100_000, ge=1)
    seed: int = Field(0, ge=-(2 ** 63), lt=2 ** 64)
    tolerance: float = Field(1e-3, gt=0)
    output: Optional[OutputFormat] = None
    workers: int = Field(1, ge=1)
    expand: int = Field(4, ge=0)
    mode: str = Field("complex", pattern="^(complex|real)$")
    sign: Optional[str] = None
    eps: List[float] = Field(default_factory=list)
    target: str = Field("volume", pattern="^(volume|lambda)$")
    i: Optional[int] = Field(None, ge=0)
    m: int = Field(12, ge=1)


# Which schema a command's --in file must satisfy
COMMAND_SCHEMAS = {
    Command.LK: PLSetSchema,
    Command.TUBE: PLSetSchema,
    Command.CROFTON: PLSetSchema,
    Command.PLOTDATA: PLSetSchema,
    Command.LOCAL: GermSchema,
    Command.POLAR: GermSchema,
    Command.MLCC_CHECK: GermSchema,
    Command.ZETA: ResolutionSchema,
    Command.ACAMPO: ResolutionSchema,
    Command.MILNOR_FIBRE: ResolutionSchema,
    Command.ORACLE: OracleSchema,
    Command.COMPLEX: ComplexGermSchema,
}
