"""
Brute-force Euler characteristics of real fibres and regions of a polynomial germ.

One variable: exact real-root isolation, then a count of points and open
intervals. Two variables: level curves are read off their crossings with the
boundary circle; open regions use the cubical complex of grid cells that
interval arithmetic certifies to lie inside, plus the arcs on the circle.
Every 2D answer is accepted only once two successive grid levels agree.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
import sympy

from lkgeom.adapter.error.error import DomainError, InconclusiveError
from lkgeom.conf import ORACLE_EPS, ORACLE_ETA, ORACLE_MAX_LEVEL, ORACLE_MIN_LEVEL
from lkgeom.utils.logger import PerformanceTracker, get_logger

logger = get_logger(__name__)

QUESTIONS = ("fibre", "closed-fibre", "link")
LEVEL_SIGNS = {"+1": 1, "-1": -1}
REGION_SIGNS = {">": 1, "<": -1}
ROW_CHUNK = 256


def parse_polynomial(f) -> Tuple[sympy.Poly, Tuple[sympy.Symbol, ...]]:
    expr = sympy.sympify(f) if isinstance(f, str) else f
    symbols = tuple(sorted(expr.free_symbols, key=lambda s: s.name))
    if not 1 <= len(symbols) <= 2:
        raise DomainError(f"Oracle handles polynomials in 1 or 2 variables, got {len(symbols)}")
    try:
        poly = sympy.Poly(expr, *symbols)
    except sympy.PolynomialError as e:
        raise DomainError(f"Not a polynomial: {f}") from e
    if poly.eval(tuple(0 for _ in symbols)) != 0:
        raise DomainError("The germ must vanish at the origin")
    return poly, symbols


# --- one variable ---------------------------------------------------------------


def _real_points(poly: sympy.Poly, eta: sympy.Rational) -> List[float]:
    roots = sympy.real_roots(poly) if poly.degree() > 0 else []
    return sorted({float(r.evalf(30)) for r in roots if -eta <= r <= eta})


def _oracle_1d(poly: sympy.Poly, question: str, sign: str, eps, eta) -> int:
    x = poly.gens[0]
    eps = sympy.Rational(eps)
    eta = sympy.Rational(eta)
    value = lambda t: float(poly.eval(sympy.Rational(t)))

    if question == "link":
        s = REGION_SIGNS[sign]
        return sum(1 for t in (-eta, eta) if s * poly.eval(t) >= 0)

    if sign in LEVEL_SIGNS:
        level = sympy.Poly(poly.as_expr() - LEVEL_SIGNS[sign] * eps, x)
        pts = _real_points(level, eta)
        if question == "fibre":
            pts = [p for p in pts if abs(p) < float(eta)]
        return len(pts)

    s = REGION_SIGNS[sign]
    cuts = set(_real_points(poly, eta)) | set(_real_points(sympy.Poly(poly.as_expr() - s * eps, x), eta))
    cuts |= {-float(eta), float(eta)}
    cuts = sorted(cuts)
    inside = lambda v: 0 < s * v < float(eps)
    # interior cut points are zeros of f or f - s*eps, never inside the open region
    chi = 0
    if question == "closed-fibre":
        chi += sum(1 for p in (cuts[0], cuts[-1]) if inside(value(p)))
    for a, b in zip(cuts[:-1], cuts[1:]):
        if inside(value((a + b) / 2)):
            chi -= 1
    return chi


# --- two variables ----------------------------------------------------------------


def _interval_pow(lo: np.ndarray, hi: np.ndarray, k: int) -> Tuple[np.ndarray, np.ndarray]:
    if k == 0:
        return np.ones_like(lo), np.ones_like(hi)
    if k % 2:
        return lo ** k, hi ** k
    a, b = lo ** k, hi ** k
    low = np.where((lo <= 0) & (hi >= 0), 0.0, np.minimum(a, b))
    return low, np.maximum(a, b)


def _interval_mul(a: Tuple[np.ndarray, np.ndarray], b: Tuple[np.ndarray, np.ndarray]):
    p = np.stack([a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]])
    return p.min(axis=0), p.max(axis=0)


class _Poly2:
    def __init__(self, poly: sympy.Poly):
        self.terms = [((int(i), int(j)), float(c)) for (i, j), c in poly.terms()]

    def __call__(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return sum(c * x ** i * y ** j for (i, j), c in self.terms)

    def enclose(self, xl, xh, yl, yh) -> Tuple[np.ndarray, np.ndarray]:
        lo = np.zeros(np.broadcast(xl, yl).shape)
        hi = np.zeros_like(lo)
        for (i, j), c in self.terms:
            ml, mh = _interval_mul(_interval_pow(xl, xh, i), _interval_pow(yl, yh, j))
            if c >= 0:
                lo, hi = lo + c * ml, hi + c * mh
            else:
                lo, hi = lo + c * mh, hi + c * ml
        return lo, hi


def _circle(level: int, eta: float) -> Tuple[np.ndarray, np.ndarray]:
    count = 2 ** (level + 5)
    theta = (np.arange(count) + 0.3819660112501051) * (2 * np.pi / count)
    return eta * np.cos(theta), eta * np.sin(theta)


def _runs(mask: np.ndarray) -> int:
    """Number of maximal circular runs of True; 0 when the mask is constant."""
    if mask.all() or not mask.any():
        return 0
    return int(np.count_nonzero(mask & ~np.roll(mask, 1)))


def _cubical_chi(f: _Poly2, s: int, eps: float, eta: float, level: int, workers: int) -> int:
    N = 2 ** level
    edges = np.linspace(-eta, eta, N + 1)

    def rows(start: int) -> np.ndarray:
        stop = min(start + ROW_CHUNK, N)
        yl, yh = edges[start:stop, None], edges[start + 1 : stop + 1, None]
        xl, xh = edges[None, :-1], edges[None, 1:]
        lo, hi = f.enclose(xl, xh, yl, yh)
        if s < 0:
            lo, hi = -hi, -lo
        far = np.maximum(xl ** 2, xh ** 2) + np.maximum(yl ** 2, yh ** 2)
        return (lo > 0) & (hi < eps) & (far < eta ** 2)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        inside = np.vstack(list(pool.map(rows, range(0, N, ROW_CHUNK))))
    P = np.pad(inside, 1)
    V = np.count_nonzero(P[:-1, :-1] | P[1:, :-1] | P[:-1, 1:] | P[1:, 1:])
    Eh = np.count_nonzero(P[:-1, 1:-1] | P[1:, 1:-1])
    Ev = np.count_nonzero(P[1:-1, :-1] | P[1:-1, 1:])
    return int(V - Eh - Ev + np.count_nonzero(inside))


def _oracle_2d_level(poly: sympy.Poly, question: str, sign: str, eps: float, eta: float, level: int, workers: int) -> int:
    f = _Poly2(poly)
    cx, cy = _circle(level, eta)
    vals = f(cx, cy)
    if question == "link":
        return _runs(REGION_SIGNS[sign] * vals >= 0)
    if sign in LEVEL_SIGNS:
        g = np.sign(vals - LEVEL_SIGNS[sign] * eps)
        crossings = int(np.count_nonzero(g != np.roll(g, 1)))
        if crossings % 2:
            return None
        closed = crossings // 2
        return closed if question == "closed-fibre" else closed - crossings
    s = REGION_SIGNS[sign]
    interior = _cubical_chi(f, s, eps, eta, level, workers)
    if question == "fibre":
        return interior
    on_circle = (s * vals > 0) & (s * vals < eps)
    return interior - _runs(on_circle)


def _stabilize(compute: Callable[[int], int], start: int) -> int:
    prev = compute(start)
    for level in range(start + 1, ORACLE_MAX_LEVEL + 1):
        cur = compute(level)
        if cur is not None and cur == prev:
            return cur
        prev = cur
    raise InconclusiveError(f"Grid refinement did not stabilize by level {ORACLE_MAX_LEVEL}")


def germ_chi_oracle(
    f,
    question: str,
    sign: str,
    eps: float = ORACLE_EPS,
    eta: float = ORACLE_ETA,
    resolution: int = ORACLE_MIN_LEVEL,
    workers: int = 1,
) -> int:
    """
    chi of a real fibre or region of the germ f at 0.

    ``sign`` is "+1" / "-1" for the level sets {f = ±eps} and ">" / "<" for the
    regions {0 < ±f < eps}. ``question`` picks the piece inside the open ball
    ("fibre", compactly supported chi), inside the closed ball ("closed-fibre")
    or, for ">" and "<", the link region {±f >= 0} on the sphere ("link").
    """
    if question not in QUESTIONS:
        raise DomainError(f"question must be one of {QUESTIONS}, got {question!r}")
    if sign not in LEVEL_SIGNS and sign not in REGION_SIGNS:
        raise DomainError(f"Unknown sign {sign!r}")
    if question == "link" and sign not in REGION_SIGNS:
        raise DomainError("Link regions are defined for the signs '<' and '>' only")
    if not (0 < eps < eta):
        raise DomainError(f"Need 0 < eps < eta, got eps={eps}, eta={eta}")
    if not ORACLE_MIN_LEVEL <= resolution < ORACLE_MAX_LEVEL:
        raise DomainError(f"Starting level must lie in [{ORACLE_MIN_LEVEL}, {ORACLE_MAX_LEVEL})")
    poly, symbols = parse_polynomial(f)
    if len(symbols) == 1:
        return _oracle_1d(poly, question, sign, eps, eta)
    with PerformanceTracker(logger, f"germ_chi_oracle[{question},{sign}]"):
        return _stabilize(
            lambda level: _oracle_2d_level(poly, question, sign, float(eps), float(eta), level, workers), resolution
        )


def oracle_table(
    f, eps: float = ORACLE_EPS, eta: float = ORACLE_ETA, signs: Sequence[str] = ("-1", "+1", "<", ">")
) -> Dict[str, Dict[str, int]]:
    """{sign: {"closed", "open", "link"}} as consumed by the real signed relations."""
    out: Dict[str, Dict[str, int]] = {}
    for sign in signs:
        row = {
            "closed": germ_chi_oracle(f, "closed-fibre", sign, eps, eta),
            "open": germ_chi_oracle(f, "fibre", sign, eps, eta),
        }
        if sign in REGION_SIGNS:
            row["link"] = germ_chi_oracle(f, "link", sign, eps, eta)
        out[sign] = row
    return out
