"""
Effective asymptotic for PL(n) with certified error radii.

    PL(n) = e^(c + 3AN^2) / (2 pi) * sum_{s,m <= r+1} (-1)^m beta_s b_{s,m} Gamma(m+1/2)
                                      / (A^(m+1/2) N^(2s+2m+25/12))  + E_maj + E_min

with N = (n / 2A)^(1/3). The major-arc radius is assembled from the X, Y, Z terms,
the minor-arc radius is exp((3A - 2/5) N^2), proven for n >= 87.
"""

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ball import BallReal, exp, half_integer_gamma, pi, power, sqrt, working_precision
from constants_kernel import saddle_scale
from exact_sequence import PlCache
from schemas import ClosedForm, ConstantSet, Enclosure, ErrorLedger
from utils import DomainError, InconclusiveError, InvalidArgumentError, log_operation

logger = logging.getLogger(__name__)

MINOR_ARC_FLOOR = 87
CLOSED_FORM_FLOORS = {1: 105, 2: 87}
R1_ENVELOPE = 527
R2_ENVELOPE = 227

TABLE_ONE_ROWS = (100, 200, 500)
TABLE_TWO_ROWS = (100, 200, 500, 1000)


def _check_order(r: int, k: ConstantSet) -> None:
    if r != k.r:
        raise InvalidArgumentError(f"constants were built for r={k.r}, not r={r}")


def n_n(n: int, A: BallReal) -> BallReal:
    """Saddle scale N_n = (n / (2A))^(1/3)."""
    return saddle_scale(n, A)


# ============================================================================
# MAIN TERM
# ============================================================================

def main_term(n: int, r: int, k: ConstantSet, max_total_degree: Optional[int] = None) -> BallReal:
    """The double sum times e^(c + 3AN^2)/(2 pi); optionally only the terms with s + m <= max_total_degree."""
    _check_order(r, k)
    if n < 1:
        raise InvalidArgumentError(f"main_term needs n >= 1, got {n}")
    with working_precision(k.precision):
        A = k.A
        N = n_n(n, A)
        N_twelfth = power(N, Fraction(1, 12))
        sqrt_A = sqrt(A)
        total = BallReal(0)
        for s in range(r + 2):
            for m in range(r + 2):
                if max_total_degree is not None and s + m > max_total_degree:
                    continue
                term = k.beta[s] * k.b[s][m] * half_integer_gamma(m)
                term = term / (A ** m * sqrt_A * N ** (2 * s + 2 * m + 2) * N_twelfth)
                total = total - term if m % 2 else total + term
        return exp(k.c + 3 * A * N * N) / (2 * pi()) * total


# ============================================================================
# ERROR BOUNDS
# ============================================================================

def major_error_bound(n: int, r: int, k: ConstantSet) -> ErrorLedger:
    """X_r, Y_r, Z_r and the assembled major-arc bound (X + Y) e^(2AN^2) / (N pi) + |Z|."""
    _check_order(r, k)
    if n < 1:
        raise InvalidArgumentError(f"major_error_bound needs n >= 1, got {n}")
    with working_precision(k.precision):
        A = k.A
        N = n_n(n, A)
        N_twelfth = power(N, Fraction(1, 12))
        AN2 = A * N * N
        growth = exp(k.c + AN2)
        two_power = 2 ** (r + 2) * power(2, Fraction(1, 24))

        # 2^(r+49/24) C_r N^(-2r-49/12)
        remainder_part = two_power * k.C_r / (N ** (2 * r + 4) * N_twelfth)
        X = growth * remainder_part

        tail = 2 ** (r + 5) * pi() ** 3 * k.alpha_s(r + 2) / N ** (2 * r + 4)
        tail = tail + 10 * exp(-Fraction(47, 10) * N)
        beta_sum = BallReal(0)
        for s in range(r + 2):
            beta_sum = beta_sum + 2 ** s * power(2, Fraction(1, 24)) * k.beta[s] / (N ** (2 * s) * N_twelfth)
        Y = abs(growth * tail * (remainder_part + beta_sum))

        # Gamma(r + 5/2) (AN^2)^(-5/2-r)
        gamma_part = half_integer_gamma(r + 2) / (AN2 ** (r + 2) * sqrt(AN2))
        saddle = k.D_r * gamma_part * exp(3 * AN2) + Fraction(64, 100) * 2 ** (r + 1) * exp(2 * AN2)
        weights = BallReal(0)
        for s in range(r + 2):
            weights = weights + k.beta[s] / (N ** (2 * s + 1) * N_twelfth)
        Z = exp(k.c) * saddle * weights

        total = (X + Y) * exp(2 * AN2) / (N * pi()) + abs(Z)
        return ErrorLedger(X_r=X, Y_r=Y, Z_r=Z, total=total)


def _minor_value(n: int, k: ConstantSet) -> BallReal:
    with working_precision(k.precision):
        N = n_n(n, k.A)
        return exp((3 * k.A - Fraction(2, 5)) * N * N)


def minor_error_bound(n: int, k: ConstantSet) -> BallReal:
    """exp((3A - 2/5) N^2), valid from n = 87 on."""
    if n < MINOR_ARC_FLOOR:
        raise DomainError(f"the minor-arc bound is proven for n >= {MINOR_ARC_FLOOR}, got n={n}", MINOR_ARC_FLOOR)
    return _minor_value(n, k)


def estimate(n: int, r: int, k: ConstantSet) -> Enclosure:
    """Main term with both radii; valid records whether n reaches max(n_r, ell_r, 87)."""
    main = main_term(n, r, k)
    ledger = major_error_bound(n, r, k)
    floor = k.validity_floor
    with working_precision(k.precision):
        N = n_n(n, k.A)
    enclosure = Enclosure(
        n=n,
        r=r,
        N_n=N,
        main=main,
        major_radius=ledger.total,
        minor_radius=_minor_value(n, k),
        valid=n >= floor,
        floor=floor,
        ledger=ledger,
    )
    log_operation("estimate", f"n={n} r={r} valid={enclosure.valid}", level="DEBUG", logger=logger)
    return enclosure


# ============================================================================
# CLOSED FORMS
# ============================================================================

def closed_form_coefficients(k: ConstantSet) -> Tuple[BallReal, BallReal, BallReal, BallReal]:
    """g_0..g_3, the s + m = j groups of the main term written as coefficients of n^(-2j/3)."""
    with working_precision(k.precision):
        A = k.A
        e_c = exp(k.c)
        root_pi = sqrt(pi())
        root_3 = sqrt(3)
        g0 = power(2, Fraction(25, 36)) * e_c * power(A, Fraction(7, 36)) / sqrt(12 * pi())
        g1 = -root_3 * power(2, Fraction(13, 36)) * e_c * (3 * A + 1385)
        g1 = g1 / (25920 * root_pi * power(A, Fraction(5, 36)))
        g2 = -root_3 * power(2, Fraction(1, 36)) * e_c * (1377 * A * A - 370650 * A + 12525625)
        g2 = g2 / (1567641600 * root_pi * power(A, Fraction(17, 36)))
        cubic = 609309 * A ** 3 - 90985275 * A * A + 4957761375 * A + 37576109375
        g3 = -root_3 * power(2, Fraction(25, 36)) * e_c * cubic
        g3 = g3 / (40633270272000 * root_pi * power(A, Fraction(29, 36)))
        return g0, g1, g2, g3


def closed_form_parts(
    n: int, r: int, k: ConstantSet, coefficients: Optional[Tuple[BallReal, ...]] = None
) -> Tuple[BallReal, BallReal, BallReal]:
    """(main, envelope, scale) with scale = e^(3AN^2) n^(-25/36); no floor check."""
    if r not in CLOSED_FORM_FLOORS:
        raise InvalidArgumentError(f"closed forms exist for r in {sorted(CLOSED_FORM_FLOORS)}, got r={r}")
    coefficients = coefficients or closed_form_coefficients(k)
    with working_precision(k.precision):
        N = n_n(n, k.A)
        scale = exp(3 * k.A * N * N) / power(n, Fraction(25, 36))
        step = 1 / power(n, Fraction(2, 3))
        series = BallReal(0)
        for j, g in enumerate(coefficients[: r + 2]):
            series = series + g * step ** j
        main = scale * series
        if r == 1:
            envelope = scale * R1_ENVELOPE / power(n, Fraction(5, 3))
        else:
            envelope = R2_ENVELOPE * exp(3 * k.A * N * N) / power(n, Fraction(109, 36)) + _minor_value(n, k)
        return main, envelope, scale


def closed_form(n: int, r: int, k: ConstantSet) -> ClosedForm:
    """The printed r = 1 and r = 2 closed forms with their error envelopes."""
    floor = CLOSED_FORM_FLOORS.get(r)
    if floor is not None and n < floor:
        raise DomainError(f"the r={r} closed form is proven for n >= {floor}, got n={n}", floor)
    main, envelope, _ = closed_form_parts(n, r, k)
    return ClosedForm(n=n, r=r, main=main, envelope=envelope)


def leading_asymptotic(n: int, k: ConstantSet) -> BallReal:
    """(2^25 A^7)^(1/36) e^c / (sqrt(12 pi) n^(25/36)) exp((27 A n^2 / 4)^(1/3))."""
    with working_precision(k.precision):
        A = k.A
        constant = power(2 ** 25 * A ** 7, Fraction(1, 36)) * exp(k.c) / sqrt(12 * pi())
        return constant / power(n, Fraction(25, 36)) * exp(power(27 * A * n * n / 4, Fraction(1, 3)))


def minor_rates(k: ConstantSet) -> Tuple[BallReal, BallReal]:
    """Exponent rates in n^(2/3) of the minor-arc bound and of the main term."""
    with working_precision(k.precision):
        A = k.A
        minor = (3 * A - Fraction(2, 5)) / power(2 * A, Fraction(2, 3))
        major = power(27 * A / 4, Fraction(1, 3))
        return minor, major


def normalized_error(n: int, value: int, k: ConstantSet) -> BallReal:
    """E(n) = (PL(n) - PL1(n)) e^(-3AN^2) n^(25/36) for the r = 1 closed form."""
    main, _, scale = closed_form_parts(n, 1, k)
    with working_precision(k.precision):
        return (value - main) / scale


# ============================================================================
# TABLES
# ============================================================================

def table_rows(which: int, cache: PlCache, k: ConstantSet) -> List[Dict[str, object]]:
    """Rows of the r = 1 error table (which=1) or the r = 2 bracket table (which=2)."""
    if which == 1:
        rows = []
        for n in TABLE_ONE_ROWS:
            cache.require(n)
            error = normalized_error(n, cache[n], k)
            with working_precision(k.precision):
                bound = R1_ENVELOPE / power(n, Fraction(5, 3))
            rows.append({"n": n, "error": error, "bound": bound, "within": abs(error).certainly_le(bound)})
        return rows
    if which == 2:
        rows = []
        for n in TABLE_TWO_ROWS:
            cache.require(n)
            form = closed_form(n, 2, k)
            rows.append({
                "n": n,
                "lower": form.lower,
                "value": cache[n],
                "upper": form.upper,
                "contains": form.contains(cache[n]),
            })
        return rows
    raise InvalidArgumentError(f"table must be 1 or 2, got {which}")


def envelope_crossover(k: ConstantSet, start: int = CLOSED_FORM_FLOORS[2], limit: int = 10 ** 4) -> int:
    """Least n >= start where the r = 2 envelope is certainly below the closed form."""
    for n in range(start, limit + 1):
        main, envelope, _ = closed_form_parts(n, 2, k)
        difference = main - envelope
        if difference.certainly_positive():
            return n
        if not difference.certainly_negative():
            raise InconclusiveError(f"envelope and closed form overlap at n={n}")
    raise InconclusiveError(f"no crossover below n={limit}")
