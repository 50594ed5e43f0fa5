import math
import pathlib
import sys

import numpy as np
import pytest

ROOT_DIR = pathlib.Path(__file__).resolve().parent.parent
if str(ROOT_DIR) not in sys.path:
    sys.path.insert(0, str(ROOT_DIR))

from contour_oracle import (
    RESIDUAL_LIMIT,
    ContourParams,
    check_decomposition,
    integrate,
    log_f,
    major_integral,
    minor_arc_profile,
    minor_bound,
    minor_integral,
    tail_bound,
)
from utils import InvalidArgumentError, QuadratureError

ZETA3 = 1.2020569031595942
ZETA_PRIME_MINUS_ONE = -0.16542114370045092


def small_z_expansion(z):
    return ZETA3 / z ** 2 + np.log(z) / 12 + ZETA_PRIME_MINUS_ONE


def test_log_f_at_one():
    value, tail = log_f(1.0)
    assert abs(value.real - 1.0362) < 5e-4
    assert abs(value.imag) < 1e-15
    assert tail < 1e-9


@pytest.mark.parametrize("z", [0.1, 0.1 + 0.05j, 0.05 - 0.02j])
def test_log_f_small_z(z):
    value, _ = log_f(z)
    assert abs(value - small_z_expansion(z)) < 1e-5


def test_log_f_vectorised():
    z = np.array([0.5, 0.5 + 0.3j, 0.5 - 0.3j])
    values, _ = log_f(z)
    assert values.shape == (3,)
    assert abs(values[1] - np.conj(values[2])) < 1e-12


def test_log_f_domain():
    with pytest.raises(InvalidArgumentError):
        log_f(0.0)
    with pytest.raises(InvalidArgumentError):
        log_f(-0.1 + 1j)


def test_tail_bound_decreases():
    assert tail_bound(0.2, 200) < tail_bound(0.2, 100) < tail_bound(0.2, 50)


def test_contour_params():
    params = ContourParams.for_n(100)
    assert abs(params.N - (100 / (2 * ZETA3)) ** (1 / 3)) < 1e-12
    assert abs(params.w(0.0) - math.pi * params.N / 2) < 1e-9
    assert abs(params.rho(params.split) - math.sqrt(2) / params.N) < 1e-12
    assert abs(params.phi(params.split) + math.pi / 4) < 1e-12
    with pytest.raises(InvalidArgumentError):
        ContourParams.for_n(0)


def test_integrate_polynomial_exactly():
    total, error, panels = integrate(lambda x: x ** 3 + 1j * x, [(0.0, 2.0)], 1e-12)
    assert abs(total - (4 + 2j)) < 1e-12
    assert panels == 8


@pytest.mark.parametrize("n", [20, 50, 100])
def test_decomposition_matches_exact(n, pl_cache):
    check = check_decomposition(n, pl_cache[n])
    assert check["residual"] <= RESIDUAL_LIMIT
    assert abs(check["imag"]) <= RESIDUAL_LIMIT * pl_cache[n]


@pytest.mark.parametrize("z", [0.05, 0.05 + 1.0j, 0.2 - 2.5j])
def test_tail_bound_covers_dropped_terms(z):
    previous = math.inf
    for truncation in (20, 50, 100, 200, 400):
        m = np.arange(truncation + 1, truncation + 40001)
        powers = np.exp(-m * z)
        dropped = np.abs(powers / (m * (1 - powers) ** 2)).sum()
        bound = tail_bound(z.real if isinstance(z, complex) else z, truncation)
        assert dropped <= bound * (1 + 1e-9)
        assert bound < previous
        previous = bound


@pytest.mark.parametrize("n", [87, 100, 150])
def test_minor_arc_below_analytic_bound(n):
    assert abs(minor_integral(n).value) <= minor_bound(n)


def test_major_arc_carries_the_value(pl_cache):
    assert major_integral(100).value > 0.99 * pl_cache[100]


def test_quadrature_budget_exhaustion():
    with pytest.raises(QuadratureError):
        minor_integral(200, tolerance=1e-14, max_panels=17)


@pytest.mark.parametrize("n", [87, 100, 200])
def test_minor_arc_profile(n):
    profile = minor_arc_profile(n)
    assert profile.holds
    assert profile.min_gap >= profile.gap_bound
