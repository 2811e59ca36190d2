"""
Laurent polynomials in L with exact rational coefficients.

Complex classes carry integer coefficients; real classes live in Z[1/2].
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from lkgeom.adapter.error.error import ValidationError

Number = Union[int, Fraction]


def _clean(coeffs: Mapping[int, Number]) -> Tuple[Tuple[int, Fraction], ...]:
    return tuple(sorted((int(k), Fraction(v)) for k, v in coeffs.items() if v != 0))


@dataclass(frozen=True)
class GrothendieckClass:
    terms: Tuple[Tuple[int, Fraction], ...] = ()

    @classmethod
    def of(cls, coeffs: Mapping[int, Number]) -> "GrothendieckClass":
        return cls(_clean(coeffs))

    @classmethod
    def constant(cls, c: Number) -> "GrothendieckClass":
        return cls.of({0: c})

    @classmethod
    def L(cls, power: int = 1) -> "GrothendieckClass":
        return cls.of({power: 1})

    @classmethod
    def zero(cls) -> "GrothendieckClass":
        return cls(())

    @classmethod
    def one(cls) -> "GrothendieckClass":
        return cls.constant(1)

    @classmethod
    def from_triples(cls, triples: Iterable[Sequence[int]]) -> "GrothendieckClass":
        """[[exponent, numerator, denominator], ...] with repeated exponents summed."""
        acc: Dict[int, Fraction] = {}
        for t in triples:
            if len(t) != 3:
                raise ValidationError(f"Class term {list(t)} is not [exponent, num, den]", error_code="BAD_CLASS")
            k, num, den = (int(x) for x in t)
            if den == 0:
                raise ValidationError("Class term with zero denominator", error_code="BAD_CLASS")
            acc[k] = acc.get(k, Fraction(0)) + Fraction(num, den)
        return cls.of(acc)

    def to_triples(self) -> List[List[int]]:
        return [[k, c.numerator, c.denominator] for k, c in self.terms]

    @property
    def coefficients(self) -> Dict[int, Fraction]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def check_mode(self, mode: str) -> "GrothendieckClass":
        for _, c in self.terms:
            den = c.denominator
            if mode == "complex" and den != 1:
                raise ValidationError(f"Complex class has non-integer coefficient {c}", error_code="BAD_CLASS")
            if mode == "real" and den & (den - 1):
                raise ValidationError(f"Real class coefficient {c} is not dyadic", error_code="BAD_CLASS")
        return self

    # --- ring structure ---------------------------------------------------

    def __add__(self, other: "GrothendieckClass") -> "GrothendieckClass":
        other = _coerce(other)
        acc = self.coefficients
        for k, c in other.terms:
            acc[k] = acc.get(k, Fraction(0)) + c
        return GrothendieckClass.of(acc)

    __radd__ = __add__

    def __neg__(self) -> "GrothendieckClass":
        return GrothendieckClass(tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other: "GrothendieckClass") -> "GrothendieckClass":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "GrothendieckClass":
        return _coerce(other) - self

    def __mul__(self, other) -> "GrothendieckClass":
        other = _coerce(other)
        acc: Dict[int, Fraction] = {}
        for k1, c1 in self.terms:
            for k2, c2 in other.terms:
                acc[k1 + k2] = acc.get(k1 + k2, Fraction(0)) + c1 * c2
        return GrothendieckClass.of(acc)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "GrothendieckClass":
        if e < 0:
            raise ValidationError("Only nonnegative powers of a class are defined", error_code="BAD_CLASS")
        out = GrothendieckClass.one()
        for _ in range(e):
            out = out * self
        return out

    def shift(self, k: int) -> "GrothendieckClass":
        """Multiply by L^k."""
        return GrothendieckClass(tuple((e + k, c) for e, c in self.terms))

    def eval(self, value: Number) -> Fraction:
        """Substitute a rational for L."""
        v = Fraction(value)
        if v == 0 and any(k < 0 for k, _ in self.terms):
            raise ValidationError("Cannot evaluate negative powers of L at 0", error_code="BAD_CLASS")
        return sum((c * v ** k for k, c in self.terms), Fraction(0))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, c in sorted(self.terms, key=lambda t: -t[0]):
            mono = "" if k == 0 else ("L" if k == 1 else f"L^{k}")
            if mono and c in (1, -1):
                coef = "" if c == 1 else "-"
            else:
                coef = str(c)
            parts.append(coef + mono)
        return " + ".join(parts).replace("+ -", "- ")


def _coerce(x) -> GrothendieckClass:
    if isinstance(x, GrothendieckClass):
        return x
    if isinstance(x, (int, Fraction)):
        return GrothendieckClass.constant(x)
    raise TypeError(f"Cannot combine a class with {type(x).__name__}")


L = GrothendieckClass.L()
ONE = GrothendieckClass.one()
