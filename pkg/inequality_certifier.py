"""
Certification of log-concavity and higher Turan inequalities for PL(n).

Large n is handled analytically: the closed form and its envelope give a certified
lower bound for PL(n)^2 - PL(n-1) PL(n+1). Everything below the analytic threshold
is checked with exact integers. Hyperbolicity of Jensen polynomials is decided by
exact real-root counting (square-free decomposition plus Sturm chains).
"""

import logging
from dataclasses import dataclass
from math import comb
from typing import Dict, List, Literal, Optional, Tuple, Union
from fractions import Fraction

from mpmath import mp
from sympy import Integer, Poly, QQ, Rational, Symbol
from tqdm import tqdm

from ball import BallReal, working_precision
from config import Config
from constants_kernel import build_constant_set
from asymptotic_evaluator import CLOSED_FORM_FLOORS, closed_form_coefficients, closed_form_parts, estimate
from exact_sequence import PlCache
from schemas import CertReport, ConstantSet, NRecord, RenormData
from utils import DomainError, InvalidArgumentError, log_operation

logger = logging.getLogger(__name__)

Coefficient = Union[int, Fraction]
AnalyticVerdict = Literal["certified", "inconclusive"]

X = Symbol("X")


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with exact coefficients, lowest degree first."""

    coeffs: Tuple[Coefficient, ...]

    def __post_init__(self):
        coeffs = list(self.coeffs)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs or [0]))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    def scale(self, factor: Coefficient) -> "IntPolynomial":
        return IntPolynomial(tuple(factor * a for a in self.coeffs))

    def to_sympy(self) -> Poly:
        return Poly([Rational(a.numerator, a.denominator) if isinstance(a, Fraction) else Integer(a)
                     for a in reversed(self.coeffs)], X, domain=QQ)

    def __str__(self) -> str:
        terms = []
        for power, a in enumerate(self.coeffs):
            if a == 0 and self.degree > 0:
                continue
            monomial = "" if power == 0 else ("X" if power == 1 else f"X^{power}")
            terms.append(f"{a}{'*' if monomial else ''}{monomial}")
        return " + ".join(reversed(terms)) if terms else "0"


# ============================================================================
# LOG-CONCAVITY
# ============================================================================

def logconcave_exact(n: int, cache: PlCache) -> bool:
    """PL(n)^2 >= PL(n-1) PL(n+1), in exact integers."""
    if n < 1:
        raise InvalidArgumentError(f"log-concavity needs n >= 1, got {n}")
    cache.require(n + 1)
    return cache[n] * cache[n] >= cache[n - 1] * cache[n + 1]


def analytic_floor(r: int, k: Optional[ConstantSet] = None) -> int:
    """Least n where the analytic predicate may be evaluated: n - 1 must reach the proven range."""
    if r in CLOSED_FORM_FLOORS:
        return CLOSED_FORM_FLOORS[r] + 1
    if k is None:
        raise InvalidArgumentError(f"constants are needed for the r={r} floor")
    return k.validity_floor + 1


class _BoundWindow:
    """Memo of (main, envelope) per n at one precision, so consecutive n share work."""

    def __init__(self, r: int, k: ConstantSet):
        self.r = r
        self.k = k
        self.values: Dict[int, Tuple[BallReal, BallReal]] = {}
        self.coefficients = closed_form_coefficients(k) if r in CLOSED_FORM_FLOORS else None

    def __call__(self, n: int) -> Tuple[BallReal, BallReal]:
        if n not in self.values:
            if len(self.values) > 64:
                self.values.pop(min(self.values))
            if self.r in CLOSED_FORM_FLOORS:
                main, envelope, _ = closed_form_parts(n, self.r, self.k, self.coefficients)
            else:
                enclosure = estimate(n, self.r, self.k)
                main, envelope = enclosure.main, enclosure.radius
            self.values[n] = (main, envelope)
        return self.values[n]


def _logconcave_margin(n: int, bounds: _BoundWindow) -> BallReal:
    main, envelope = bounds(n)
    below_main, below_envelope = bounds(n - 1)
    above_main, above_envelope = bounds(n + 1)
    with working_precision(bounds.k.precision):
        lower = main - envelope
        return lower * lower - (below_main + below_envelope) * (above_main + above_envelope)


def logconcave_analytic(n: int, r: int, k: ConstantSet,
                        windows: Optional[Dict[int, _BoundWindow]] = None,
                        store: Optional[bool] = None) -> AnalyticVerdict:
    """
    Certified when (PL(n) - E(n))^2 - (PL(n-1) + E(n-1)) (PL(n+1) + E(n+1)) is a
    positive ball, with PL and E the closed form and envelope (r = 1, 2) or the
    general enclosure. Precision doubles while the ball straddles zero.
    """
    floor = analytic_floor(r, k)
    if n < floor:
        raise DomainError(f"the analytic bound needs n >= {floor}, got n={n}", floor)
    windows = windows if windows is not None else {}
    constants = k
    while True:
        window = windows.get(constants.precision)
        if window is None:
            window = windows[constants.precision] = _BoundWindow(r, constants)
        margin = _logconcave_margin(n, window)
        if margin.certainly_positive():
            return "certified"
        if margin.certainly_negative() or constants.precision * 2 > Config.MAX_PRECISION:
            return "inconclusive"
        log_operation("logconcave_analytic", f"n={n} undecided at {constants.precision} bits",
                      level="DEBUG", logger=logger)
        constants = build_constant_set(
            r, constants.precision * 2, published=constants.remainder_source == "published", store=store
        )


def analytic_threshold(r: int, k: ConstantSet,
                       store: Optional[bool] = None) -> Tuple[Optional[int], List[NRecord]]:
    """
    Least N0 from which the analytic predicate holds: doubling search, binary search,
    then a scan over [N0, 2 N0] that moves N0 past any failure it meets.
    """
    windows: Dict[int, _BoundWindow] = {}

    def holds(n: int) -> bool:
        return logconcave_analytic(n, r, k, windows, store) == "certified"

    floor = analytic_floor(r, k)
    high = max(floor, Config.ANALYTIC_SEARCH_START)
    while not holds(high):
        high *= 2
        if high > Config.ANALYTIC_SEARCH_LIMIT:
            log_operation("analytic_threshold", f"no certified n up to {Config.ANALYTIC_SEARCH_LIMIT}",
                          level="WARNING", logger=logger)
            return None, []

    low = floor
    if holds(low):
        high = low
    while high - low > 1:
        middle = (low + high) // 2
        if holds(middle):
            high = middle
        else:
            low = middle
    threshold = high

    verdicts: Dict[int, bool] = {}
    for n in tqdm(range(threshold, 2 * threshold + 1), disable=not Config.SHOW_PROGRESS,
                  desc="analytic scan", unit="n"):
        verdicts[n] = holds(n)
        if not verdicts[n]:
            threshold = n + 1
    records = [NRecord(n=n, method="analytic", verdict=True) for n in sorted(verdicts) if n >= threshold]
    log_operation("analytic_threshold", f"r={r} N0={threshold}", logger=logger)
    return threshold, records


def certify_logconcavity(
    r: int,
    cache: PlCache,
    k: Optional[ConstantSet] = None,
    exact_from: Optional[int] = None,
    exact_to: Optional[int] = None,
    threshold: Optional[int] = None,
    analytic_records: Optional[List[NRecord]] = None,
) -> CertReport:
    """Analytic threshold plus an exact check of every n in [exact_from, max(N0 - 1, exact_to)]."""
    k = k or build_constant_set(r)
    exact_from = Config.LOGCONCAVE_EXACT_START if exact_from is None else exact_from
    if exact_from < 1:
        raise InvalidArgumentError(f"log-concavity is defined for n >= 1, got {exact_from}")
    if threshold is None:
        threshold, analytic_records = analytic_threshold(r, k)
    analytic_records = analytic_records or []

    if threshold is None:
        end = exact_to if exact_to is not None else exact_from
    else:
        end = max(threshold - 1, exact_to or 0)
    cache.require(end + 1)

    records: List[NRecord] = []
    failures: List[int] = []
    for n in tqdm(range(exact_from, end + 1), disable=not Config.SHOW_PROGRESS, desc="exact", unit="n"):
        verdict = logconcave_exact(n, cache)
        records.append(NRecord(n=n, method="exact", verdict=verdict))
        if not verdict:
            failures.append(n)
    records.extend(record for record in analytic_records if record.n > end)

    if threshold is None:
        status = "inconclusive"
    elif failures:
        status = "refuted"
    elif not k.d_r_certified:
        log_operation("certify_logconcavity", f"D_{r} is not certified; analytic phase is inconclusive",
                      level="WARNING", logger=logger)
        status = "inconclusive"
    else:
        status = "certified"
    n_max = max([end] + [record.n for record in records])
    report = CertReport(
        claim="logconcave",
        n_min=exact_from,
        n_max=n_max,
        analytic_threshold=threshold,
        certified_from=exact_from if status == "certified" else (failures[-1] + 1 if failures else None),
        failures=failures,
        records=records,
        status=status,
        precision=k.precision,
    )
    log_operation("certify_logconcavity", f"r={r} status={status} threshold={threshold} "
                  f"failures={len(failures)}", logger=logger)
    return report


# ============================================================================
# JENSEN POLYNOMIALS AND HYPERBOLICITY
# ============================================================================

def jensen_poly(d: int, n: int, cache: PlCache) -> IntPolynomial:
    """J^{d,n}(X) = sum_j C(d, j) PL(n + j) X^j."""
    if d < 1:
        raise InvalidArgumentError(f"Jensen degree must be at least 1, got {d}")
    if n < 0:
        raise InvalidArgumentError(f"Jensen shift must be nonnegative, got {n}")
    cache.require(n + d)
    return IntPolynomial(tuple(comb(d, j) * cache[n + j] for j in range(d + 1)))


def _sign_variations(signs: List[int]) -> int:
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: Poly) -> int:
    """Distinct real roots of a nonconstant polynomial, by its Sturm chain."""
    chain = p.sturm()
    at_plus = [1 if q.LC() > 0 else -1 for q in chain]
    at_minus = [s * (-1 if q.degree() % 2 else 1) for s, q in zip(at_plus, chain)]
    return _sign_variations(at_minus) - _sign_variations(at_plus)


def is_hyperbolic(p: IntPolynomial) -> bool:
    """All roots real, counted with multiplicity through the square-free decomposition."""
    if p.is_zero:
        raise InvalidArgumentError("the zero polynomial has no well-defined roots")
    poly = p.to_sympy()
    degree = poly.degree()
    if degree == 0:
        return True
    _, factors = poly.sqf_list()
    real_roots = sum(multiplicity * count_real_roots(factor) for factor, multiplicity in factors)
    return real_roots == degree


def turan_check_range(d: int, n_min: int, n_max: int, cache: PlCache, shift: int = -1) -> CertReport:
    """Degree-d Turan inequality at each n in [n_min, n_max]: J^{d, n + shift} is hyperbolic."""
    if n_min > n_max:
        raise InvalidArgumentError(f"empty range {n_min}..{n_max}")
    if n_min + shift < 0:
        raise InvalidArgumentError(f"shift {shift} makes J^(d, n_min + shift) undefined for n_min={n_min}")
    cache.require(n_max + shift + d)

    records: List[NRecord] = []
    failures: List[int] = []
    for n in tqdm(range(n_min, n_max + 1), disable=not Config.SHOW_PROGRESS, desc=f"turan({d})", unit="n"):
        verdict = is_hyperbolic(jensen_poly(d, n + shift, cache))
        records.append(NRecord(n=n, method="exact", verdict=verdict))
        if not verdict:
            failures.append(n)

    # least n from which every checked n holds; the range itself is refuted by any failure
    certified_from = failures[-1] + 1 if failures else n_min
    status = "refuted" if failures else "certified"
    log_operation("turan_check_range", f"d={d} {n_min}..{n_max} from={certified_from} status={status}",
                  logger=logger)
    return CertReport(
        claim="turan",
        degree=d,
        shift=shift,
        n_min=n_min,
        n_max=n_max,
        certified_from=certified_from,
        failures=failures,
        records=records,
        status=status,
    )


# ============================================================================
# HERMITE LIMIT
# ============================================================================

def hermite(d: int) -> IntPolynomial:
    """H_0 = 1, H_1 = X, H_{d+1} = X H_d - 2d H_{d-1}; generating function e^(-t^2 + Xt)."""
    if d < 0:
        raise InvalidArgumentError(f"Hermite degree must be nonnegative, got {d}")
    previous, current = [1], [0, 1]
    if d == 0:
        return IntPolynomial(tuple(previous))
    for j in range(1, d):
        shifted = [0] + current
        padded = previous + [0] * (len(shifted) - len(previous))
        previous, current = current, [a - 2 * j * b for a, b in zip(shifted, padded)]
    return IntPolynomial(tuple(current))


def hermite_renormalize(d: int, n: int, cache: PlCache, dps: int = 80) -> RenormData:
    """
    delta^-d / PL(n) * J^{d,n}((delta X - 1) / e^A) against H_d, with A and delta
    from central differences of L = log PL: A = L'(n), delta^2 = -L''(n) / 2.
    """
    if d < 1:
        raise InvalidArgumentError(f"Jensen degree must be at least 1, got {d}")
    if n < 1:
        raise InvalidArgumentError(f"hermite_renormalize needs n >= 1, got {n}")
    cache.require(max(n + d, n + 1))
    target = hermite(d).coeffs

    with mp.workdps(dps):
        L_below, L_here, L_above = (mp.log(cache[j]) for j in (n - 1, n, n + 1))
        growth = (L_above - L_below) / 2
        delta_squared = -(L_above - 2 * L_here + L_below) / 2
        if delta_squared <= 0:
            raise InvalidArgumentError(f"delta(n)^2 = {mp.nstr(delta_squared, 5)} is not positive at n={n}")
        delta = mp.sqrt(delta_squared)
        base = mp.mpf(cache[n])

        coefficients = []
        for power in range(d + 1):
            total = mp.mpf(0)
            for j in range(power, d + 1):
                ratio = mp.mpf(cache[n + j]) / base
                sign = -1 if (j - power) % 2 else 1
                total += sign * comb(d, j) * ratio * mp.exp(-j * growth) * comb(j, power)
            coefficients.append(total * delta ** power / delta ** d)
        distance = max(abs(a - b) for a, b in zip(coefficients, target))

        return RenormData(
            d=d,
            n=n,
            A_n=float(growth),
            delta_n=float(delta),
            renormalized_coeffs=[float(a) for a in coefficients],
            hermite_distance=float(distance),
        )
