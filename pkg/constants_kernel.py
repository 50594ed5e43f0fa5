"""
Constants consumed by the effective asymptotic for PL(n).

A = zeta(3) and c = zeta'(-1) come from tail-bounded summations, the alpha, beta
and b coefficients are exact rationals lifted into balls, and the remainder
constants C_r, D_r are certified upper bounds. Every value is an enclosure at the
requested working precision.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Dict, List, Optional, Tuple

from sympy import bernoulli

import data_operations
from ball import (
    BallReal,
    cbrt,
    cos,
    current_precision,
    exp,
    glaisher,
    log,
    pi,
    power,
    sqrt,
    working_precision,
)
from config import Config
from curve_taylor import maximize_chi_coefficients
from reports import render_template
from schemas import ConstantSet
from series import TruncatedSeries
from utils import InconclusiveError, InvalidArgumentError, log_operation

logger = logging.getLogger(__name__)

GUARD_BITS = 20

# Remainder constants as printed for the r = 2 proof, used as upper bounds only
PUBLISHED_REMAINDER_CONSTANTS: Dict[int, Dict[str, str]] = {
    2: {"C_r": "2.0007", "D_r": "5.3"},
}

N_R_FACTOR = Fraction(56, 1000)
ELL_R_DECAY = Fraction(47, 10)
THRESHOLD_SCAN_LIMIT = 10 ** 6


def _require_precision(precision: int) -> None:
    if precision < Config.MIN_PRECISION:
        raise InvalidArgumentError(f"precision must be at least {Config.MIN_PRECISION} bits")


@lru_cache(maxsize=None)
def bernoulli_fraction(k: int) -> Fraction:
    """B_k as an exact Fraction (B_1 = -1/2 is never needed here)."""
    value = bernoulli(k)
    return Fraction(int(value.p), int(value.q))


# ============================================================================
# ZETA VALUES
# ============================================================================

@lru_cache(maxsize=None)
def zeta3(precision: int) -> BallReal:
    """zeta(3) = 5/2 sum (-1)^(k+1) / (k^3 C(2k, k)), tail bounded by the next term."""
    _require_precision(precision)
    terms = precision // 2 + 8
    with working_precision(precision + GUARD_BITS):
        total = BallReal(0)
        for k in range(1, terms + 1):
            term = BallReal(1) / (k ** 3 * comb(2 * k, k))
            total = total + term if k % 2 else total - term
        tail = Fraction(1, (terms + 1) ** 3 * comb(2 * terms + 2, terms + 1))
        total = total + BallReal.from_interval(-BallReal(tail).upper, BallReal(tail).upper)
        return Fraction(5, 2) * total


def _euler_maclaurin_terms(precision: int) -> int:
    return precision // 6 + 10


def zeta3_euler_maclaurin(precision: int) -> BallReal:
    """zeta(3) by Euler-Maclaurin summation with exact rational terms."""
    _require_precision(precision)
    cutoff = _euler_maclaurin_terms(precision)

    def correction(j: int) -> Fraction:
        # B_2j/(2j)! * (3)_(2j-1) * N^(-2-2j), with (3)_(2j-1) = (2j+1)!/2
        return bernoulli_fraction(2 * j) / factorial(2 * j) * Fraction(factorial(2 * j + 1), 2) / cutoff ** (2 * j + 2)

    value = sum((Fraction(1, k ** 3) for k in range(1, cutoff)), Fraction(0))
    value += Fraction(1, 2 * cutoff ** 2) + Fraction(1, 2 * cutoff ** 3)
    value += sum((correction(j) for j in range(1, cutoff + 1)), Fraction(0))
    remainder = 4 * abs(correction(cutoff + 1))

    with working_precision(precision + GUARD_BITS):
        center = BallReal(value)
        bound = BallReal(remainder).upper
        return center + BallReal.from_interval(-bound, bound)


@lru_cache(maxsize=None)
def zeta_prime_minus_one(precision: int) -> BallReal:
    """zeta'(-1) from the s-derivative of the Euler-Maclaurin expansion at s = -1."""
    _require_precision(precision)
    cutoff = _euler_maclaurin_terms(precision)

    def correction(j: int) -> Fraction:
        return -bernoulli_fraction(2 * j) * factorial(2 * j - 3) / factorial(2 * j) / Fraction(cutoff) ** (2 * j - 2)

    with working_precision(precision + GUARD_BITS):
        total = BallReal(0)
        for k in range(2, cutoff):
            total = total - k * log(k)
        log_cutoff = log(cutoff)
        square = cutoff * cutoff
        total = total + Fraction(square, 2) * log_cutoff - Fraction(square, 4)
        total = total - Fraction(cutoff, 2) * log_cutoff
        total = total + Fraction(1, 12) * (1 + log_cutoff)
        total = total + BallReal(sum((correction(j) for j in range(2, cutoff + 1)), Fraction(0)))
        bound = BallReal(4 * abs(correction(cutoff + 1))).upper
        return total + BallReal.from_interval(-bound, bound)


def zeta_prime_via_glaisher(precision: int) -> BallReal:
    """zeta'(-1) = 1/12 - log(Glaisher's constant)."""
    _require_precision(precision)
    with working_precision(precision + GUARD_BITS):
        return Fraction(1, 12) - log(glaisher())


# ============================================================================
# SERIES COEFFICIENTS
# ============================================================================

@lru_cache(maxsize=None)
def alpha_rational(s: int) -> Fraction:
    """alpha_s = (2s+1) |B_2s| |B_2s+2| / (2s (2s+2)!), the pi powers having cancelled."""
    if s < 1:
        raise InvalidArgumentError(f"alpha needs s >= 1, got {s}")
    numerator = (2 * s + 1) * abs(bernoulli_fraction(2 * s)) * abs(bernoulli_fraction(2 * s + 2))
    return numerator / (2 * s * factorial(2 * s + 2))


def alpha(s: int, precision: int) -> BallReal:
    with working_precision(precision):
        return BallReal(alpha_rational(s))


@lru_cache(maxsize=None)
def beta_rationals(r: int) -> Tuple[Fraction, ...]:
    """beta_0..beta_{r+1}: coefficients of exp(-sum_{i<=r+1} alpha_i y^i)."""
    if r < 1:
        raise InvalidArgumentError(f"r must be at least 1, got {r}")
    exponent = TruncatedSeries([Fraction(0)] + [-alpha_rational(i) for i in range(1, r + 2)], r + 1)
    return tuple(exponent.exp())


def beta_coeffs(r: int, precision: int) -> List[BallReal]:
    with working_precision(precision):
        return [BallReal(value) for value in beta_rationals(r)]


@lru_cache(maxsize=None)
def b_rational(s: int, m: int) -> Fraction:
    """[y^2m] (1+y)^(2s+2m+13/12) (1+2y/3)^(-(m+1/2)); b_{s,m} is this times 3^-(m+1/2)."""
    if s < 0 or m < 0:
        raise InvalidArgumentError(f"b needs s, m >= 0, got s={s}, m={m}")
    order = 2 * m
    first = TruncatedSeries([1, 1], order).binomial_power(Fraction(2 * s + 2 * m) + Fraction(13, 12))
    second = TruncatedSeries([1, Fraction(2, 3)], order).binomial_power(-Fraction(2 * m + 1, 2))
    return Fraction((first * second)[order])


def b_coeff(s: int, m: int, precision: int) -> BallReal:
    with working_precision(precision):
        return BallReal(b_rational(s, m)) / (3 ** m * sqrt(3))


# ============================================================================
# THRESHOLDS
# ============================================================================

def _decide_below(value: Callable[[], BallReal], bound: Fraction, precision: int, label: str) -> bool:
    """Certified value < bound, doubling the precision while the balls overlap."""
    current = precision
    while current <= Config.MAX_PRECISION:
        with working_precision(current):
            ball = value()
            limit = BallReal(bound)
            if ball.certainly_lt(limit):
                return True
            if ball.lower >= limit.upper:
                return False
        log_operation("decide_below", f"{label}: undecided at {current} bits", level="DEBUG", logger=logger)
        current *= 2
    raise InconclusiveError(f"{label}: comparison undecided at {Config.MAX_PRECISION} bits")


def _least_satisfying(predicate: Callable[[int], bool], label: str) -> int:
    for n in range(1, THRESHOLD_SCAN_LIMIT + 1):
        if predicate(n):
            log_operation(label, f"least n = {n}", level="DEBUG", logger=logger)
            return n
    raise InconclusiveError(f"{label}: no n <= {THRESHOLD_SCAN_LIMIT} satisfies the predicate")


def saddle_scale(n: int, A: BallReal) -> BallReal:
    """N_n = (n / (2A))^(1/3)."""
    if n < 1:
        raise InvalidArgumentError(f"N_n needs n >= 1, got {n}")
    return cbrt(n / (2 * A))


def n_r_value(r: int, n: int) -> BallReal:
    """The sum whose value below 1 defines n_r, at the current precision."""
    A = zeta3(current_precision())
    cube_root_n = cbrt(n)
    base = cbrt(A) / (power(2, Fraction(7, 6)) * cube_root_n)
    total = BallReal(0)
    for s in range(1, r + 2):
        weight = pi() ** 2 * cube_root_n / (cbrt(2 * A) * s) + 2
        total = total + (s * base) ** (2 * s) * weight
    return N_R_FACTOR * total


def ell_r_value(r: int, n: int) -> BallReal:
    """2^(r+4) pi^3 alpha_{r+2} N^(-2r-4) + 5 e^(-4.7 N), to be compared with 1/2."""
    A = zeta3(current_precision())
    N = saddle_scale(n, A)
    leading = 2 ** (r + 4) * pi() ** 3 * BallReal(alpha_rational(r + 2)) / N ** (2 * r + 4)
    return leading + 5 * exp(-ELL_R_DECAY * N)


@lru_cache(maxsize=None)
def threshold_n_r(r: int, precision: int = 64) -> int:
    if r < 1:
        raise InvalidArgumentError(f"r must be at least 1, got {r}")
    return _least_satisfying(
        lambda n: _decide_below(lambda: n_r_value(r, n), Fraction(1), precision, f"n_{r} at n={n}"),
        f"threshold_n_r(r={r})",
    )


@lru_cache(maxsize=None)
def threshold_ell_r(r: int, precision: int = 64) -> int:
    if r < 1:
        raise InvalidArgumentError(f"r must be at least 1, got {r}")
    return _least_satisfying(
        lambda n: _decide_below(lambda: ell_r_value(r, n), Fraction(1, 2), precision, f"ell_{r} at n={n}"),
        f"threshold_ell_r(r={r})",
    )


def minor_arc_floor(A: BallReal, precision: int = 64) -> int:
    """Least n with (3A - 1/2) N^2 + 0.33 N <= (3A - 2/5) N^2, i.e. 0.33 N <= N^2 / 10."""
    def slack(n: int) -> BallReal:
        N = saddle_scale(n, A)
        return Fraction(33, 100) * N - N * N / 10

    # equality never occurs at an integer n
    return _least_satisfying(
        lambda n: _decide_below(lambda: slack(n), Fraction(0), precision, f"minor floor at n={n}"),
        "minor_arc_floor",
    )


# ============================================================================
# REMAINDER CONSTANTS
# ============================================================================

def c_r_constant(r: int, precision: int, grid_points: Optional[int] = None) -> BallReal:
    """
    Enclosure of C_r = 2 max_t |exp(-sum_s alpha_s e^(ist))| = 2 exp(max_t h(t)),
    h(t) = -sum_s alpha_s cos(st).

    h is even and 2 pi periodic, so t ranges over [0, pi]. Between grid points h
    exceeds the larger sample by at most L * spacing / 2 with L = sum s alpha_s.
    """
    if r < 1:
        raise InvalidArgumentError(f"r must be at least 1, got {r}")
    grid_points = grid_points or Config.CR_GRID_POINTS
    alphas = [alpha_rational(s) for s in range(1, r + 2)]
    lipschitz = sum((s * a for s, a in enumerate(alphas, start=1)), Fraction(0))

    with working_precision(precision):
        step = pi() / grid_points
        best_lower = None
        best_upper = None
        for j in range(grid_points + 1):
            t = j * step
            h = BallReal(0)
            for s, a in enumerate(alphas, start=1):
                h = h - BallReal(a) * cos(s * t)
            best_lower = h.lower if best_lower is None else max(best_lower, h.lower)
            best_upper = h.upper if best_upper is None else max(best_upper, h.upper)
        slack = (lipschitz * step / 2).upper
        lower = 2 * exp(BallReal(best_lower))
        upper = 2 * exp(BallReal(best_upper) + BallReal(slack))
        value = BallReal.from_interval(lower.lower, upper.upper)

    log_operation("c_r_constant", f"r={r} C_r={value.format(10)}", level="DEBUG", logger=logger)
    return value


@lru_cache(maxsize=None)
def _chi_maximum(r: int, initial_cells: Optional[int], budget: Optional[int]):
    return maximize_chi_coefficients(r, initial_cells=initial_cells, budget=budget)


def d_r_constant(
    r: int,
    precision: int,
    initial_cells: Optional[int] = None,
    budget: Optional[int] = None,
) -> Tuple[BallReal, bool]:
    """
    Upper enclosure of D_r = max_s sup_t |chi_s^(2r+4)(t)| / (2r+4)! and whether it
    counts as certified. The ball runs from the best sampled value to the certified
    upper bound.
    """
    if r < 1:
        raise InvalidArgumentError(f"r must be at least 1, got {r}")
    result = _chi_maximum(r, initial_cells, budget)
    with working_precision(precision):
        value = result.enclosure
    certified = r in (1, 2)
    if not certified:
        log_operation("d_r_constant", f"r={r} bound is not certified", level="WARNING", logger=logger)
    if not result.converged:
        log_operation(
            "d_r_constant",
            f"r={r} stopped after {result.evaluations} evaluations; returning the current upper bound",
            level="WARNING",
            logger=logger,
        )
    return value, certified


def _published_upper(text: str) -> BallReal:
    return BallReal(Fraction(text)).upper_ball()


def _exact_text(value) -> str:
    """Binary endpoint as an exact rational string."""
    mantissa, exponent = value.man_exp
    return str(Fraction(mantissa) * Fraction(2) ** exponent)


def _d_r_key(precision: int, cells: int, budget: int) -> str:
    return f"precision={precision};cells={cells};budget={budget}"


def _stored_d_r(r: int, key: str) -> Optional[Tuple[BallReal, bool]]:
    outcome = data_operations.get_stored_constant(r, "D_r", key)
    if not outcome.ok or outcome.data is None:
        return None
    data = outcome.data
    bounds = [BallReal(Fraction(data["lower"])), BallReal(Fraction(data["upper"]))]
    return BallReal.hull(bounds), data["certified"]


def remainder_constants(
    r: int,
    precision: int,
    published: bool = False,
    store: Optional[bool] = None,
    dr_cells: Optional[int] = None,
) -> Tuple[BallReal, BallReal, bool, str]:
    """C_r, D_r, whether D_r is certified, and where the pair came from."""
    if published and r in PUBLISHED_REMAINDER_CONSTANTS:
        table = PUBLISHED_REMAINDER_CONSTANTS[r]
        with working_precision(precision):
            return _published_upper(table["C_r"]), _published_upper(table["D_r"]), True, "published"
    if published:
        log_operation(
            "remainder_constants",
            f"no published remainder constants for r={r}; computing them",
            level="WARNING",
            logger=logger,
        )

    C_r = c_r_constant(r, precision)
    cells = dr_cells or Config.DR_INITIAL_CELLS
    key = _d_r_key(Config.DR_PRECISION, cells, Config.DR_EVAL_BUDGET)
    if Config.store_enabled(store):
        stored = _stored_d_r(r, key)
        if stored is not None:
            log_operation("remainder_constants", f"r={r} D_r taken from the results store", logger=logger)
            return C_r, stored[0], stored[1], "stored"

    D_r, certified = d_r_constant(r, precision, initial_cells=cells)
    if Config.store_enabled(store):
        data_operations.store_constant(
            r, "D_r", key, _exact_text(D_r.lower), _exact_text(D_r.upper), certified
        )
    return C_r, D_r, certified, "computed"


@lru_cache(maxsize=None)
def build_constant_set(
    r: int,
    precision: Optional[int] = None,
    published: Optional[bool] = None,
    store: Optional[bool] = None,
    dr_cells: Optional[int] = None,
) -> ConstantSet:
    """Assemble every constant the asymptotic needs for truncation order r."""
    precision = precision or Config.DEFAULT_PRECISION
    published = Config.USE_PUBLISHED_CONSTANTS if published is None else published
    _require_precision(precision)
    if r < 1:
        raise InvalidArgumentError(f"r must be at least 1, got {r}")

    with working_precision(precision):
        A = zeta3(precision)
        c = zeta_prime_minus_one(precision)
        alphas = [alpha(s, precision) for s in range(1, r + 3)]
        betas = beta_coeffs(r, precision)
        b = [[b_coeff(s, m, precision) for m in range(r + 2)] for s in range(r + 2)]
    C_r, D_r, certified, source = remainder_constants(r, precision, published, store, dr_cells)

    constants = ConstantSet(
        r=r,
        precision=precision,
        A=A,
        c=c,
        alpha=alphas,
        alpha_exact=[alpha_rational(s) for s in range(1, r + 3)],
        beta=betas,
        beta_exact=list(beta_rationals(r)),
        b=b,
        C_r=C_r,
        D_r=D_r,
        n_r=threshold_n_r(r),
        ell_r=threshold_ell_r(r),
        remainder_source=source,
        d_r_certified=certified,
    )
    log_operation(
        "build_constant_set",
        f"r={r} precision={precision} remainder={source} floor={constants.validity_floor}",
        logger=logger,
    )
    return constants


def constant_lines(k: ConstantSet) -> List[Tuple[str, str]]:
    """(name, 'midpoint ± radius') pairs in report order."""
    digits = max(12, int(k.precision * 0.30103) - 4)
    lines = [("A", k.A.format(digits)), ("c", k.c.format(digits))]
    lines.extend((f"alpha_{s}", value.format(digits)) for s, value in enumerate(k.alpha, start=1))
    lines.extend((f"beta_{s}", value.format(digits)) for s, value in enumerate(k.beta))
    for s, row in enumerate(k.b):
        lines.extend((f"b_{s}_{m}", value.format(digits)) for m, value in enumerate(row))
    lines.append((f"C_{k.r}", k.C_r.format(digits)))
    lines.append((f"D_{k.r}", k.D_r.format(digits)))
    return lines


def render_report(k: ConstantSet) -> str:
    """Text report: one `name = midpoint ± radius` line per constant plus provenance."""
    return render_template(
        "constants.txt.j2",
        constants=k,
        lines=constant_lines(k),
        minor_floor=minor_arc_floor(k.A),
    )
