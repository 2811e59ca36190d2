"""Combinatorial data of an embedded normal-crossings resolution of f : (K^n, 0) -> (K, 0)."""

from dataclasses import dataclass, field
from functools import reduce
from math import gcd
from typing import Dict, Optional, Tuple

from lkgeom.adapter.error.error import ValidationError
from lkgeom.model.grothendieck import GrothendieckClass

SIGNS = ("-1", "+1", "<", ">")


@dataclass(frozen=True)
class Component:
    id: str
    N: int
    nu: int
    exceptional: bool


@dataclass(frozen=True)
class ResolutionStratum:
    """E_I^0 for one index set I, with the class of its covering Ẽ_I^0 (complex) or per-sign classes (real)."""

    ids: Tuple[str, ...]
    chi: Optional[int] = None
    klass: Optional[GrothendieckClass] = None
    signed: Dict[str, GrothendieckClass] = field(default_factory=dict)
    chi_signed: Dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class ResolutionData:
    n: int
    components: Tuple[Component, ...]
    strata: Tuple[ResolutionStratum, ...]
    monomial: Optional[Tuple[int, int]] = None
    polynomial: Optional[str] = None
    name: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"Ambient dimension must be >= 1, got {self.n}", error_code="BAD_DIMENSION")
        ids = [c.id for c in self.components]
        if len(set(ids)) != len(ids):
            raise ValidationError("Duplicate component id", error_code="BAD_RESOLUTION")
        for c in self.components:
            if c.N < 1 or c.nu < 1:
                raise ValidationError(f"Component {c.id!r} needs N >= 1 and nu >= 1", error_code="BAD_RESOLUTION")
        known = set(ids)
        for s in self.strata:
            if not s.ids:
                raise ValidationError("Stratum with an empty index set", error_code="BAD_RESOLUTION")
            unknown = [i for i in s.ids if i not in known]
            if unknown:
                raise ValidationError(f"Stratum references unknown component(s) {unknown}", error_code="UNKNOWN_COMPONENT")
            bad_signs = set(s.signed) - set(SIGNS) | set(s.chi_signed) - set(SIGNS)
            if bad_signs:
                raise ValidationError(f"Unknown sign label(s) {sorted(bad_signs)}", error_code="BAD_SIGN")
            if s.klass is not None:
                s.klass.check_mode("complex")
            for c in s.signed.values():
                c.check_mode("real")
        if self.strata and not self.exceptional_ids:
            raise ValidationError("Resolution has strata but no exceptional component", error_code="BAD_RESOLUTION")
        if self.monomial is not None and (len(self.monomial) != 2 or min(self.monomial) < 1):
            raise ValidationError("monomial must be [a, b] with a, b >= 1", error_code="BAD_RESOLUTION")

    @property
    def by_id(self) -> Dict[str, Component]:
        return {c.id: c for c in self.components}

    @property
    def exceptional_ids(self) -> Tuple[str, ...]:
        return tuple(c.id for c in self.components if c.exceptional)

    def meets_exceptional(self, s: ResolutionStratum) -> bool:
        exc = set(self.exceptional_ids)
        return any(i in exc for i in s.ids)

    def cover_degree(self, s: ResolutionStratum) -> int:
        """m_I = gcd of the multiplicities N_i, i in I."""
        by_id = self.by_id
        return reduce(gcd, (by_id[i].N for i in s.ids))

    def singleton(self, cid: str) -> Optional[ResolutionStratum]:
        for s in self.strata:
            if s.ids == (cid,):
                return s
        return None

    def with_component(self, cid: str, **changes) -> "ResolutionData":
        """Copy with one component's fields replaced."""
        comps = tuple(
            Component(c.id, changes.get("N", c.N), changes.get("nu", c.nu), changes.get("exceptional", c.exceptional))
            if c.id == cid
            else c
            for c in self.components
        )
        return ResolutionData(self.n, comps, self.strata, self.monomial, self.polynomial, self.name)
