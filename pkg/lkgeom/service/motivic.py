"""
Motivic zeta functions from resolution data and their realizations.

Z_f(T) = sum over strata I meeting the exceptional divisor of
(L - 1)^{|I|-1} [Ẽ_I^0] prod_{i in I} L^{-nu_i} T^{N_i} / (1 - L^{-nu_i} T^{N_i}).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from lkgeom.adapter.error.error import DomainError, ValidationError
from lkgeom.model.grothendieck import ONE, GrothendieckClass, L
from lkgeom.model.resolution import SIGNS, ResolutionData, ResolutionStratum
from lkgeom.utils.logger import get_logger

logger = get_logger(__name__)

DELTA = {">": "+1", "<": "-1"}


@dataclass(frozen=True)
class Gate:
    nu: int
    N: int
    exceptional: bool = True


@dataclass(frozen=True)
class ZetaTerm:
    coefficient: GrothendieckClass
    gates: Tuple[Gate, ...]
    ids: Tuple[str, ...] = ()


@dataclass(frozen=True)
class ZetaFunction:
    n: int
    terms: Tuple[ZetaTerm, ...]
    mode: str = "complex"
    sign: Optional[str] = None

    @property
    def is_zero(self) -> bool:
        return not self.terms


@dataclass(frozen=True)
class MonodromyProfile:
    lefschetz: Dict[int, int]
    period: int


@dataclass(frozen=True)
class ChiZeta:
    """sum_{m=1..N} Lambda(M^m) T^m / (1 - T^N)."""

    numerator: Tuple[int, ...]
    period: int

    @property
    def is_zero(self) -> bool:
        return not any(self.numerator)

    def expand(self, M: int) -> List[int]:
        return [self.numerator[(m - 1) % self.period] for m in range(1, M + 1)]


@dataclass(frozen=True)
class PoleCandidate:
    nu: int
    N: int
    reduced: Tuple[int, int]

    @property
    def label(self) -> str:
        p, q = self.reduced
        return f"exp(2*pi*i*{p}/{q})"


@dataclass(frozen=True)
class ConsistencyReport:
    rows: Tuple[Tuple[int, int, int, bool], ...]
    class_mismatches: Tuple[int, ...] = ()
    passed: bool = True


@dataclass(frozen=True)
class RealRelationsReport:
    rows: Dict[str, Dict[str, object]] = field(default_factory=dict)
    advisory: bool = False
    passed: bool = True


# --- zeta -------------------------------------------------------------------


def _stratum_class(res: ResolutionData, s: ResolutionStratum, mode: str, sign: Optional[str], allow_chi: bool):
    if mode == "complex":
        if s.klass is not None:
            return s.klass
        if allow_chi and s.chi is not None:
            return GrothendieckClass.constant(res.cover_degree(s) * s.chi)
        raise ValidationError(f"Stratum {list(s.ids)} has no class (only chi)", error_code="BARE_CHI")
    if sign not in SIGNS:
        raise DomainError(f"Real mode needs a sign in {SIGNS}, got {sign!r}")
    if sign in s.signed:
        return s.signed[sign]
    if allow_chi and sign in s.chi_signed:
        return GrothendieckClass.constant(s.chi_signed[sign])
    raise ValidationError(f"Stratum {list(s.ids)} has no class for sign {sign}", error_code="BARE_CHI")


def zeta_from_resolution(
    res: ResolutionData, mode: str = "complex", sign: Optional[str] = None, allow_chi: bool = False
) -> ZetaFunction:
    if mode not in ("complex", "real"):
        raise DomainError(f"mode must be 'complex' or 'real', got {mode!r}")
    by_id = res.by_id
    terms = []
    for s in res.strata:
        if not res.meets_exceptional(s):
            continue
        klass = _stratum_class(res, s, mode, sign, allow_chi)
        gates = tuple(sorted((Gate(by_id[i].nu, by_id[i].N, by_id[i].exceptional) for i in s.ids), key=lambda g: (g.N, g.nu)))
        terms.append(ZetaTerm((L - 1) ** (len(s.ids) - 1) * klass, gates, s.ids))
    return ZetaFunction(res.n, tuple(terms), mode, sign)


def _gate_tuples(gates: Sequence[Gate], budget: int):
    """All (k_1, ..., k_r), k >= 1, with sum k_j N_j <= budget."""
    if not gates:
        yield ()
        return
    head, rest = gates[0], gates[1:]
    floor = sum(g.N for g in rest)
    k = 1
    while k * head.N + floor <= budget:
        for tail in _gate_tuples(rest, budget - k * head.N):
            yield (k,) + tail
        k += 1


def expand_series(Z: ZetaFunction, M: int) -> List[GrothendieckClass]:
    """Coefficients of T^1 .. T^M."""
    if M < 1:
        raise DomainError(f"expand_series needs M >= 1, got {M}")
    out = [GrothendieckClass.zero() for _ in range(M)]
    for term in Z.terms:
        for ks in _gate_tuples(term.gates, M):
            m = sum(k * g.N for k, g in zip(ks, term.gates))
            out[m - 1] = out[m - 1] + term.coefficient.shift(-sum(k * g.nu for k, g in zip(ks, term.gates)))
    return out


def motivic_milnor_fibre(Z: ZetaFunction) -> GrothendieckClass:
    """S_f = -lim_{T -> oo} Z_f(T); every gate tends to -1."""
    total = GrothendieckClass.zero()
    for term in Z.terms:
        total = total + term.coefficient * (-1) ** len(term.gates)
    return -total


def milnor_fibre_by_series(Z: ZetaFunction) -> GrothendieckClass:
    """
    Negated constant term of the expansion of Z in 1/T.

    Each gate is -sum_{k >= 0} L^{k nu} T^{-k N}; products are truncated at the
    largest power of 1/T any product can still bring back to the constant term.
    """
    total = GrothendieckClass.zero()
    for term in Z.terms:
        depth = sum(g.N for g in term.gates)
        series: Dict[int, GrothendieckClass] = {0: ONE}
        for g in term.gates:
            gate = {-k * g.N: -GrothendieckClass.L(k * g.nu) for k in range(depth // g.N + 1)}
            prod: Dict[int, GrothendieckClass] = {}
            for p1, c1 in series.items():
                for p2, c2 in gate.items():
                    p = p1 + p2
                    if p < -depth:
                        continue
                    prod[p] = prod.get(p, GrothendieckClass.zero()) + c1 * c2
            series = prod
        total = total + term.coefficient * series.get(0, GrothendieckClass.zero())
    return -total


def euler_realization(c: GrothendieckClass, convention: str = "complex") -> Fraction:
    """chi at L = 1 (complex) or compactly supported chi at L = -1 (real)."""
    if convention == "complex":
        return c.eval(1)
    if convention == "real":
        return c.eval(-1)
    raise DomainError(f"convention must be 'complex' or 'real', got {convention!r}")


# --- A'Campo and monodromy ----------------------------------------------------


def _chi_of_component(res: ResolutionData, cid: str) -> int:
    s = res.singleton(cid)
    if s is None:
        raise ValidationError(f"No stratum for exceptional component {cid!r}", error_code="MISSING_CHI")
    if s.chi is not None:
        return int(s.chi)
    if s.klass is not None:
        N = res.by_id[cid].N
        chi_cover = euler_realization(s.klass, "complex")
        if chi_cover % N == 0:
            return int(chi_cover / N)
    raise ValidationError(f"Stratum of {cid!r} carries no Euler characteristic", error_code="MISSING_CHI")


def acampo_lefschetz(res: ResolutionData, m: int) -> int:
    """Lambda(M^m) = sum over exceptional i with N_i | m of N_i * chi(E_i^0); m = 0 gives chi of the Milnor fibre."""
    if m < 0:
        raise DomainError(f"m must be >= 0, got {m}")
    total = 0
    for cid in res.exceptional_ids:
        N = res.by_id[cid].N
        if m == 0 or m % N == 0:
            total += N * _chi_of_component(res, cid)
    return total


def _lcm(values: Sequence[int]) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def monodromy_profile(res: ResolutionData, M: int) -> MonodromyProfile:
    period = _lcm([res.by_id[c].N for c in res.exceptional_ids])
    top = max(M, period)
    return MonodromyProfile({m: acampo_lefschetz(res, m) for m in range(1, top + 1)}, period)


def chi_zeta_closed_form(profile: MonodromyProfile) -> ChiZeta:
    N = profile.period
    if N < 1:
        raise ValidationError("Period must be positive", error_code="BAD_PERIOD")
    missing = [m for m in range(1, N + 1) if m not in profile.lefschetz]
    if missing:
        raise ValidationError(f"Profile lacks Lambda(M^m) for m = {missing}", error_code="BAD_PERIOD")
    for m, v in profile.lefschetz.items():
        if m > N and v != profile.lefschetz.get(m - N, v):
            raise ValidationError(f"Sequence is not {N}-periodic at m = {m}", error_code="NOT_PERIODIC")
    return ChiZeta(tuple(profile.lefschetz[m] for m in range(1, N + 1)), N)


def monomial_arc_series(a: int, b: int, M: int) -> List[GrothendieckClass]:
    """[X_{m,0,1}] L^{-2m} for f = x^a y^b, m = 1..M, by counting orders of the two coordinates."""
    g = gcd(a, b)
    out = []
    for m in range(1, M + 1):
        c = GrothendieckClass.zero()
        for i in range(1, m // a + 1):
            rest = m - a * i
            if rest >= b and rest % b == 0:
                j = rest // b
                c = c + g * (L - 1).shift(-i - j)
        out.append(c)
    return out


def consistency_check_14(res: ResolutionData, M: int) -> ConsistencyReport:
    """
    chi of the m-th zeta coefficient against Lambda(M^m) for m = 1..M; with a
    monomial attached, also the classes against the arc count.
    """
    Z = zeta_from_resolution(res, "complex", allow_chi=True)
    coeffs = expand_series(Z, M)
    rows = []
    for m, c in enumerate(coeffs, start=1):
        chi = int(euler_realization(c, "complex"))
        lam = acampo_lefschetz(res, m)
        rows.append((m, chi, lam, chi == lam))
    mismatches: Tuple[int, ...] = ()
    if res.monomial is not None:
        exact = monomial_arc_series(res.monomial[0], res.monomial[1], M)
        mismatches = tuple(m for m, (c, e) in enumerate(zip(coeffs, exact), start=1) if c != e)
    passed = all(r[3] for r in rows) and not mismatches
    logger.info_data("zeta coefficients against A'Campo numbers", name=res.name, M=M, passed=passed, class_mismatches=list(mismatches))
    return ConsistencyReport(tuple(rows), mismatches, passed)


def monodromy_pole_candidates(Z: ZetaFunction) -> List[PoleCandidate]:
    """Exceptional gates (nu, N) with nu/N in lowest terms, deduplicated and sorted."""
    seen = set()
    out = []
    for term in Z.terms:
        for g in term.gates:
            if not g.exceptional or (g.nu, g.N) in seen:
                continue
            seen.add((g.nu, g.N))
            q = Fraction(g.nu, g.N)
            out.append(PoleCandidate(g.nu, g.N, (q.numerator, q.denominator)))
    return sorted(out, key=lambda p: (p.N, p.nu))


def milnor_number_brieskorn(a: int, b: int) -> int:
    """mu of x^a + y^b."""
    if a < 1 or b < 1:
        raise DomainError(f"Exponents must be >= 1, got ({a}, {b})")
    return (a - 1) * (b - 1)


# --- real signed relations ----------------------------------------------------


def signed_weight_sums(res: ResolutionData, sign: str) -> Tuple[Fraction, Fraction]:
    """
    (sum 2^{|I|-1} chi_c(Ẽ_I^{0,?}), sum (-2)^{|I|-1} chi_c(Ẽ_I^{0,?})) over strata meeting the exceptional divisor.

    The first sum is what the limit of the real zeta function realizes to.
    """
    w_limit = w_literal = Fraction(0)
    for s in res.strata:
        if not res.meets_exceptional(s):
            continue
        chi = euler_realization(_stratum_class(res, s, "real", sign, True), "real")
        k = len(s.ids)
        w_limit += 2 ** (k - 1) * chi
        w_literal += (-2) ** (k - 1) * chi
    return w_limit, w_literal


def real_chi_relations(
    res: ResolutionData, oracle: Optional[Dict[str, Dict[str, int]]] = None
) -> RealRelationsReport:
    """
    Check, per sign, chi(S_f^?) against the weighted stratum sum and against
    topological values of the fibres: closed ("closed"), open ("open") and, for
    < and >, the link region ("link").
    """
    n = res.n
    advisory = n != 2
    rows: Dict[str, Dict[str, object]] = {}
    passed = True
    signs = [s for s in SIGNS if any(s in st.signed or s in st.chi_signed for st in res.strata)]
    for sign in signs:
        Z = zeta_from_resolution(res, "real", sign, allow_chi=True)
        chi_s = euler_realization(motivic_milnor_fibre(Z), "real")
        w_limit, w_literal = signed_weight_sums(res, sign)
        row: Dict[str, object] = {
            "chi_S": chi_s,
            "weighted_sum": w_limit,
            "literal_sum": w_literal,
            "identity": chi_s == w_limit,
        }
        ok = chi_s == w_limit
        if oracle and sign in oracle:
            o = oracle[sign]
            checks = {}
            if "closed" in o:
                checks["S_equals_closed"] = chi_s == o["closed"]
                if "open" in o:
                    checks["boundary"] = o["closed"] == (-1) ** (n + 1) * o["open"]
            if sign in DELTA and "link" in o:
                checks["S_equals_minus_link"] = chi_s == -o["link"]
                partner = oracle.get(DELTA[sign], {})
                if "closed" in partner:
                    checks["link_equals_partner"] = o["link"] == partner["closed"]
            row.update(checks)
            if not advisory:
                ok = ok and all(checks.values())
        row["passed"] = ok
        rows[sign] = row
        passed = passed and ok
    logger.info_data("real signed relations", name=res.name, passed=passed, advisory=advisory)
    return RealRelationsReport(rows, advisory, passed)
