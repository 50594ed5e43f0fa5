import math
import pathlib
import sys
from fractions import Fraction

import pytest
from mpmath import mp

ROOT_DIR = pathlib.Path(__file__).resolve().parent.parent
if str(ROOT_DIR) not in sys.path:
    sys.path.insert(0, str(ROOT_DIR))

from ball import BallReal, working_precision
from config import Config
from constants_kernel import (
    _chi_maximum,
    _decide_below,
    alpha_rational,
    b_coeff,
    b_rational,
    bernoulli_fraction,
    beta_rationals,
    build_constant_set,
    c_r_constant,
    constant_lines,
    d_r_constant,
    ell_r_value,
    minor_arc_floor,
    n_r_value,
    render_report,
    threshold_ell_r,
    threshold_n_r,
    zeta3,
    zeta3_euler_maclaurin,
    zeta_prime_minus_one,
    zeta_prime_via_glaisher,
)
from curve_taylor import (
    cell_bound,
    chi_series,
    chi_taylor_coefficient,
    chi_value,
    curve_box,
    curve_t,
    initial_edges,
    maximize_chi_coefficients,
    origin_tail_bound,
)
from series import TruncatedSeries
from utils import InvalidArgumentError

ZETA3 = 1.2020569031595942
ZETA_PRIME_MINUS_ONE = -0.16542114370045092


def test_bernoulli_numbers():
    assert bernoulli_fraction(2) == Fraction(1, 6)
    assert bernoulli_fraction(4) == Fraction(-1, 30)
    assert bernoulli_fraction(12) == Fraction(-691, 2730)


def test_alpha_values():
    assert alpha_rational(1) == Fraction(1, 2880)
    assert alpha_rational(2) == Fraction(1, 725760)
    assert alpha_rational(3) == Fraction(1, 43545600)
    with pytest.raises(InvalidArgumentError):
        alpha_rational(0)


def test_beta_values():
    betas = beta_rationals(2)
    a1, a2 = alpha_rational(1), alpha_rational(2)
    assert betas[0] == 1
    assert betas[1] == -a1
    assert betas[2] == a1 * a1 / 2 - a2
    assert len(betas) == 4


def test_b_values():
    assert b_rational(0, 0) == 1
    assert b_rational(0, 1) == Fraction(277, 288)
    assert b_rational(0, 2) < 0
    b01 = b_coeff(0, 1, 128)
    assert abs(float(b01) - 277 / 288 / 3 ** 1.5) < 1e-15


def test_b_terms_decay_with_m():
    assert abs(b_rational(0, 2)) / 9 < abs(b_rational(0, 1)) / 3 < abs(b_rational(0, 0))


def test_zeta3_two_schemes_agree():
    apery = zeta3(256)
    euler_maclaurin = zeta3_euler_maclaurin(256)
    assert apery.overlaps(euler_maclaurin)
    assert abs(float(apery) - ZETA3) < 1e-15
    assert apery.radius < 1e-60


def test_zeta_prime_two_routes_agree():
    summed = zeta_prime_minus_one(192)
    glaisher = zeta_prime_via_glaisher(192)
    assert summed.overlaps(glaisher)
    assert abs(float(summed) - ZETA_PRIME_MINUS_ONE) < 1e-15


def test_thresholds():
    assert threshold_n_r(1) == 1
    assert threshold_n_r(2) == 2
    assert threshold_n_r(5) == 18
    assert threshold_ell_r(2) == 1
    assert threshold_ell_r(22) == 1
    assert threshold_ell_r(23) == 2


@pytest.mark.parametrize("value, bound, just_below", [
    (n_r_value, Fraction(1), (5, 17)),
    (ell_r_value, Fraction(1, 2), (23, 1)),
])
def test_thresholds_are_minimal(value, bound, just_below):
    r, n = just_below
    assert not _decide_below(lambda: value(r, n), bound, 64, "minimality")
    assert _decide_below(lambda: value(r, n + 1), bound, 64, "minimality")


@pytest.mark.parametrize("r", [1, 2, 5])
def test_beta_inverts_alpha_exponential(r):
    order = r + 1
    alphas = TruncatedSeries([Fraction(0)] + [alpha_rational(i) for i in range(1, order + 1)], order)
    product = TruncatedSeries(beta_rationals(r), order) * alphas.exp()
    assert product == TruncatedSeries.one(order)


def test_alpha_ratio_below_quarter():
    for s in range(1, 20):
        assert alpha_rational(s) > 0
        assert alpha_rational(s + 1) / alpha_rational(s) < Fraction(1, 4)


def test_minor_arc_floor(constants_r2):
    assert minor_arc_floor(constants_r2.A) == 87


def test_c2_enclosure():
    C2 = c_r_constant(2, 128)
    assert C2.lower > 2
    assert C2.upper <= 2.0007


def test_published_constant_set(constants_r2):
    assert constants_r2.remainder_source == "published"
    assert constants_r2.C_r.lower == constants_r2.C_r.upper
    assert abs(float(constants_r2.C_r) - 2.0007) < 1e-12
    assert abs(float(constants_r2.D_r) - 5.3) < 1e-12
    assert constants_r2.validity_floor == 87
    assert len(constants_r2.b) == 4
    assert constants_r2.beta_exact[0] == 1


def test_report_lists_every_constant(constants_r2):
    names = [name for name, _ in constant_lines(constants_r2)]
    assert names[:2] == ["A", "c"]
    assert "b_3_3" in names and names[-2:] == ["C_2", "D_2"]
    report = render_report(constants_r2)
    assert report.startswith("# constants for r=2 at 192 bits")
    assert "A = 1.2020569031" in report
    assert "minor_arc_floor = 87" in report
    assert "remainder_source = published" in report


def test_constant_set_rejects_bad_order():
    with pytest.raises(InvalidArgumentError):
        build_constant_set(0, 128, published=True)


def test_curve_parameter_endpoints():
    assert curve_t(1).contains(0)
    assert abs(float(curve_t("0.25")) ** 2 - 4) < 1e-12


def test_chi_coefficient_is_finite_at_saddle():
    value = chi_taylor_coefficient(0, 2, 1)
    assert value.is_finite()
    assert value.upper > 0


def test_origin_tail_is_negligible():
    tail = origin_tail_bound(BallReal(2) ** -40, 8)
    assert tail.upper < 1e-20


def test_chi_closed_form_at_saddle():
    expected = 1 / (2 * math.pi * math.sqrt(3))
    assert BallReal(abs(chi_value(0, 1) - expected)).upper < 1e-15


def test_chi_series_starts_at_closed_form():
    v0 = curve_box(0.25, 0.25)
    series = chi_series(v0, 1, 2)
    assert len(series) == 3
    for s, coefficients in enumerate(series):
        assert len(coefficients) == 3
        assert BallReal(abs(coefficients[0] - chi_value(s, v0))).upper < 1e-12


def test_cell_bound_dominates_points_inside():
    a = mp.mpf("0.5")
    b = a + mp.mpf(1) / 64
    with working_precision(64):
        bound = cell_bound(a, b, 2)
        inside = [a + (b - a) * k / 8 for k in range(9)]
        values = [chi_taylor_coefficient(s, 2, x).lower for x in inside for s in range(4)]
    assert bound.sample <= bound.upper
    assert max(values) <= bound.upper


def test_initial_edges_are_dyadic_then_uniform():
    edges = initial_edges(mp.ldexp(mp.mpf(1), -20), 16)
    assert edges[0] == mp.ldexp(mp.mpf(1), -20)
    assert edges[1] == 2 * edges[0]
    assert edges[-1] == 1
    assert all(left < right for left, right in zip(edges, edges[1:]))
    assert edges.index(mp.mpf(1) / 16) == 16


def test_chi_maximum_small_budget():
    result = maximize_chi_coefficients(1, initial_cells=8, budget=48)
    assert result.evaluations <= 48 + 1
    assert result.best_sample <= result.upper.upper
    assert result.upper.is_finite()


@pytest.mark.slow
def test_computed_d2_is_below_published_bound():
    value, certified = d_r_constant(2, 128)
    assert certified
    assert value.upper <= 5.3

    search = _chi_maximum(2, None, None)
    assert search.converged
    assert search.evaluations <= Config.DR_EVAL_BUDGET + 1
    assert search.upper.upper <= search.best_sample * (1 + Config.DR_TOLERANCE) + search.tail.upper + 1e-20
