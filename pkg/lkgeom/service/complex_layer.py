"""
Integer combinatorics of complex germs: sigma-tilde from Milnor numbers of
generic plane sections, the Kashiwara recursion and the Euler obstruction.
No complex geometry is computed; stratifications and tables are input data.
"""

from typing import Dict, List, Optional, Sequence, Set, Tuple

from lkgeom.adapter.error.error import ValidationError
from lkgeom.model.results import ComplexGermData, KashiwaraReport, Stratum
from lkgeom.utils.logger import get_logger

logger = get_logger(__name__)


def sigma_tilde_from_mu(mu: Sequence[int], n: int, d: Optional[int] = None) -> Tuple[int, ...]:
    """
    (sigma~_0, ..., sigma~_d) of a hypersurface germ in C^n with
    sigma~_i = 1 + (-1)^{n-i-1} mu^{(n-i)} for i >= 1 and sigma~_0 = 1.
    """
    mu = [int(m) for m in mu]
    if len(mu) != n + 1:
        raise ValidationError(f"mu sequence must have n + 1 = {n + 1} entries, got {len(mu)}", error_code="BAD_MU")
    if any(m < 0 for m in mu):
        raise ValidationError("Milnor numbers are nonnegative", error_code="BAD_MU")
    d = n - 1 if d is None else d
    return (1,) + tuple(1 + (-1) ** (n - i - 1) * mu[n - i] for i in range(1, d + 1))


def euler_obstruction(polar_mults: Sequence[int]) -> int:
    """Eu = sum_i (-1)^i e(P^i)."""
    if any(int(e) < 0 for e in polar_mults):
        raise ValidationError("Polar multiplicities are nonnegative", error_code="BAD_POLAR")
    return sum((-1) ** i * int(e) for i, e in enumerate(polar_mults))


class _Recursion:
    def __init__(self, data: ComplexGermData):
        self.by_id: Dict[str, Stratum] = {}
        for s in data.strata:
            if s.id in self.by_id:
                raise ValidationError(f"Duplicate stratum id {s.id!r}", error_code="BAD_STRATIFICATION")
            self.by_id[s.id] = s
        for s in data.strata:
            for parent in s.closure_of:
                if parent not in self.by_id:
                    raise ValidationError(
                        f"Stratum {s.id!r} lies in the closure of unknown stratum {parent!r}",
                        error_code="BAD_STRATIFICATION",
                    )
                if self.by_id[parent].dim <= s.dim:
                    raise ValidationError(
                        f"Stratum {s.id!r} cannot lie in the closure of {parent!r} of no larger dimension",
                        error_code="BAD_STRATIFICATION",
                    )
        self._check_acyclic()
        points = [s for s in data.strata if s.dim == 0]
        if len(points) > 1:
            raise ValidationError("More than one point stratum", error_code="BAD_STRATIFICATION")
        self.point = points[0].id if points else None
        self.top = self._top(data)
        self.tables = {s.id: tuple(s.sigma_tilde) for s in data.strata}
        if not self.tables[self.top.id] and data.mu_sequence:
            n = len(data.mu_sequence) - 1
            self.tables[self.top.id] = sigma_tilde_from_mu(data.mu_sequence, n, self.top.dim)
        self.cache: Dict[Tuple[str, int], int] = {}

    def _top(self, data: ComplexGermData) -> Stratum:
        dmax = max((s.dim for s in data.strata), default=0)
        tops = [s for s in data.strata if s.dim == dmax]
        if len(tops) != 1:
            raise ValidationError("Stratification needs a unique top-dimensional stratum", error_code="BAD_STRATIFICATION")
        return tops[0]

    def _check_acyclic(self) -> None:
        state: Dict[str, int] = {}

        def visit(sid: str) -> None:
            if state.get(sid) == 1:
                raise ValidationError(f"Closure relation has a cycle through {sid!r}", error_code="CYCLIC_STRATIFICATION")
            if state.get(sid) == 2:
                return
            state[sid] = 1
            for parent in self.by_id[sid].closure_of:
                visit(parent)
            state[sid] = 2

        for sid in self.by_id:
            visit(sid)

    def sigma(self, sid: str, index: int) -> int:
        s = self.by_id[sid]
        if index > s.dim:
            return 0
        table = self.tables[sid]
        if index >= len(table):
            raise ValidationError(
                f"Stratum {sid!r} has no sigma~ entry at index {index}", error_code="MISSING_SIGMA_TILDE"
            )
        return int(table[index])

    def below(self, sid: str) -> List[Stratum]:
        """Strata of positive dimension inside the closure of ``sid``, other than itself."""
        out: Set[str] = set()
        frontier = [sid]
        children = {t.id: [u for u in self.by_id.values() if t.id in u.closure_of] for t in self.by_id.values()}
        while frontier:
            cur = frontier.pop()
            for c in children[cur]:
                if c.id not in out:
                    out.add(c.id)
                    frontier.append(c.id)
        return [self.by_id[t] for t in sorted(out) if self.by_id[t].dim > 0]

    def E(self, sid: str, k: int) -> int:
        key = (sid, k)
        if key not in self.cache:
            total = self.sigma(sid, k + 1)
            for t in self.below(sid):
                total += self.E(t.id, k) * self.sigma(sid, k + t.dim + 1)
            self.cache[key] = total
        return self.cache[key]


def kashiwara_E(data: ComplexGermData, k: int, stratum: Optional[str] = None) -> int:
    """
    E^k of the closure of ``stratum`` (default: the top stratum) at the origin.

    E^k(closure s) = sigma~_{k+1}(s) + sum over strata t in the closure of s of
    E^k(closure t) * sigma~_{k + dim t + 1}(s); the point stratum contributes E = 1.
    """
    if k < 0:
        raise ValidationError(f"k must be >= 0, got {k}", error_code="BAD_INDEX")
    rec = _Recursion(data)
    sid = rec.top.id if stratum is None else stratum
    if sid not in rec.by_id:
        raise ValidationError(f"Unknown stratum {sid!r}", error_code="BAD_STRATIFICATION")
    if sid == rec.point:
        return 1
    return rec.E(sid, k)


def kashiwara_consistency(data: ComplexGermData) -> KashiwaraReport:
    """E^0..E^d of the germ and the identities (-1)^i (E^{d-i-1} - E^{d-i}) = e(P^i)."""
    rec = _Recursion(data)
    d = data.dim if data.dim is not None else rec.top.dim
    E = tuple(1 if rec.top.id == rec.point else rec.E(rec.top.id, k) for k in range(d + 1))
    diffs = tuple((-1) ** i * (E[d - i - 1] - E[d - i]) for i in range(d))
    polar = tuple(int(e) for e in data.polar_multiplicities)
    eu = euler_obstruction(polar) if polar else None
    passed = True
    if polar:
        if len(polar) != d:
            raise ValidationError(
                f"Expected {d} polar multiplicities, got {len(polar)}", error_code="BAD_POLAR"
            )
        passed = diffs == polar and E[0] == eu
    logger.debug_data("kashiwara recursion", E=list(E), polar=list(polar), passed=passed)
    return KashiwaraReport(d, E, polar, diffs, eu, passed)
