import math
import pathlib
import random
import sys
from fractions import Fraction

import numpy as np
import pytest
from sympy import Integer, Poly, Symbol

ROOT_DIR = pathlib.Path(__file__).resolve().parent.parent
if str(ROOT_DIR) not in sys.path:
    sys.path.insert(0, str(ROOT_DIR))

import inequality_certifier
from ball import BallReal
from inequality_certifier import (
    IntPolynomial,
    analytic_floor,
    analytic_threshold,
    certify_logconcavity,
    count_real_roots,
    hermite,
    hermite_renormalize,
    is_hyperbolic,
    jensen_poly,
    logconcave_analytic,
    logconcave_exact,
    turan_check_range,
)
from utils import CacheRangeError, DomainError, InvalidArgumentError

LOGCONCAVE_FAILURES = [1, 3, 5, 7, 9, 11]
X = Symbol("X")


def test_exact_log_concavity_failures(pl_cache):
    failures = [n for n in range(1, 200) if not logconcave_exact(n, pl_cache)]
    assert failures == LOGCONCAVE_FAILURES


def test_exact_check_needs_cache():
    from exact_sequence import pl_values

    with pytest.raises(CacheRangeError):
        logconcave_exact(10, pl_values(10))
    with pytest.raises(InvalidArgumentError):
        logconcave_exact(0, pl_values(10))


def test_certify_with_given_threshold(pl_cache, constants_r2):
    report = certify_logconcavity(2, pl_cache, constants_r2, exact_from=12, threshold=300, analytic_records=[])
    assert report.status == "certified"
    assert report.failures == []
    assert report.certified_from == 12
    assert report.n_max == 299
    assert all(record.method == "exact" for record in report.records)


def test_certify_with_uncertified_remainder_is_inconclusive(pl_cache, constants_r2):
    constants = constants_r2.model_copy(update={"d_r_certified": False})
    report = certify_logconcavity(2, pl_cache, constants, exact_from=12, threshold=300, analytic_records=[])
    assert report.status == "inconclusive"
    assert report.failures == []


def test_certify_from_one_is_refuted(pl_cache, constants_r2):
    report = certify_logconcavity(2, pl_cache, constants_r2, exact_from=1, threshold=100, analytic_records=[])
    assert report.status == "refuted"
    assert report.failures == LOGCONCAVE_FAILURES
    assert report.certified_from == 12
    assert report.summary()["claim"] == "logconcave"


def test_analytic_floor(constants_r2):
    assert analytic_floor(2, constants_r2) == 88
    assert analytic_floor(1) == 106
    with pytest.raises(DomainError):
        logconcave_analytic(80, 2, constants_r2)


def test_analytic_predicate_far_out(constants_r2):
    assert logconcave_analytic(40000, 2, constants_r2) == "certified"


def test_precision_escalation_keeps_store_choice(monkeypatch, constants_r2):
    margins = iter([BallReal.from_interval(-1, 1), BallReal(1)])
    calls = []

    def rebuild(r, precision, published=False, store=None):
        calls.append({"precision": precision, "published": published, "store": store})
        return constants_r2.model_copy(update={"precision": precision})

    monkeypatch.setattr(inequality_certifier, "_logconcave_margin", lambda n, window: next(margins))
    monkeypatch.setattr(inequality_certifier, "build_constant_set", rebuild)
    assert logconcave_analytic(500, 2, constants_r2, store=True) == "certified"
    assert calls == [{"precision": 384, "published": constants_r2.remainder_source == "published", "store": True}]


@pytest.mark.slow
def test_analytic_threshold_below_ten_thousand(constants_r2):
    threshold, records = analytic_threshold(2, constants_r2)
    assert threshold is not None
    assert 1000 < threshold <= 10 ** 4
    assert records and all(record.verdict and record.n >= threshold for record in records)
    assert logconcave_analytic(threshold, 2, constants_r2) == "certified"


@pytest.mark.slow
def test_certify_logconcavity_end_to_end(constants_r2):
    from exact_sequence import pl_values

    threshold, records = analytic_threshold(2, constants_r2)
    cache = pl_values(threshold)
    report = certify_logconcavity(2, cache, constants_r2, threshold=threshold, analytic_records=records)
    assert report.status == "certified"
    assert report.certified_from == 12
    assert report.analytic_threshold == threshold


def test_jensen_polynomial(pl_cache):
    assert jensen_poly(2, 0, pl_cache).coeffs == (1, 2, 3)
    assert jensen_poly(3, 1, pl_cache).coeffs == (1, 9, 18, 13)
    with pytest.raises(InvalidArgumentError):
        jensen_poly(0, 5, pl_cache)


def test_hermite_polynomials():
    assert hermite(0).coeffs == (1,)
    assert hermite(1).coeffs == (0, 1)
    assert hermite(2).coeffs == (-2, 0, 1)
    assert hermite(3).coeffs == (0, -6, 0, 1)
    assert hermite(4).coeffs == (12, 0, -12, 0, 1)
    assert str(hermite(2)) == "1*X^2 + -2"


def test_real_root_counting():
    X = Symbol("X")
    assert count_real_roots(Poly(X ** 3 - X, X)) == 3
    assert count_real_roots(Poly(X ** 2 + 1, X)) == 0


def test_hyperbolicity():
    assert is_hyperbolic(hermite(4))
    assert is_hyperbolic(hermite(7))
    assert is_hyperbolic(IntPolynomial((1, -2, 1)))
    assert is_hyperbolic(IntPolynomial((5,)))
    assert not is_hyperbolic(IntPolynomial((1, 0, 1)))
    assert is_hyperbolic(IntPolynomial((Fraction(1, 4), 1, 1)))
    with pytest.raises(InvalidArgumentError):
        is_hyperbolic(IntPolynomial((0, 0)))


def test_turan_degree_two_matches_log_concavity(pl_cache):
    report = turan_check_range(2, 1, 11, pl_cache)
    assert report.status == "refuted"
    assert report.failures == LOGCONCAVE_FAILURES
    assert report.certified_from == 12

    report = turan_check_range(2, 12, 200, pl_cache)
    assert report.status == "certified"
    assert report.certified_from == 12


def test_turan_range_with_any_failure_is_refuted(pl_cache):
    report = turan_check_range(2, 1, 20, pl_cache)
    assert report.status == "refuted"
    assert report.failures == LOGCONCAVE_FAILURES
    assert report.certified_from == 12


def test_turan_degree_three(pl_cache):
    report = turan_check_range(3, 1, 400, pl_cache)
    assert report.claim_label == "turan(3)"
    assert len(report.records) == 400
    assert report.failures and report.failures[0] == 1
    assert report.status == "refuted"
    assert report.certified_from == report.failures[-1] + 1

    if report.certified_from <= 400:
        tail = turan_check_range(3, report.certified_from, 400, pl_cache)
        assert tail.status == "certified"
        assert tail.failures == []


@pytest.mark.slow
def test_turan_degree_two_is_log_concavity_up_to_2000():
    from exact_sequence import pl_values

    cache = pl_values(2001)
    for n in range(2, 2001):
        assert is_hyperbolic(jensen_poly(2, n - 1, cache)) == logconcave_exact(n, cache), n


@pytest.mark.slow
def test_turan_degree_three_holds_from_small_n_to_ten_thousand():
    from exact_sequence import pl_values

    cache = pl_values(10 ** 4 + 2)
    report = turan_check_range(3, 1, 10 ** 4, cache)
    assert report.certified_from <= 10 ** 4
    assert all(n < report.certified_from for n in report.failures)
    assert turan_check_range(3, report.certified_from, 10 ** 4, cache).status == "certified"


def test_sturm_count_matches_numeric_roots():
    rng = random.Random(2024)
    for _ in range(40):
        real = rng.sample(range(-15, 16), rng.randint(0, 4))
        shifts = [rng.randint(1, 9) for _ in range(rng.randint(0, 1))]
        if not real and not shifts:
            continue
        expr = math.prod((X - root for root in real), start=Integer(1))
        expr *= math.prod((X ** 2 + c for c in shifts), start=Integer(1))
        poly = Poly(expr, X)
        numeric = np.roots([float(a) for a in poly.all_coeffs()])
        numeric_real = sum(1 for z in numeric if abs(z.imag) < 1e-6)
        assert count_real_roots(poly) == len(real) == numeric_real
        assert is_hyperbolic(IntPolynomial(tuple(int(a) for a in reversed(poly.all_coeffs())))) == (not shifts)


@pytest.mark.parametrize("factor", [3, -2, Fraction(1, 7)])
def test_hyperbolicity_is_scale_invariant(factor, pl_cache):
    for p in (hermite(5), jensen_poly(2, 0, pl_cache), jensen_poly(3, 20, pl_cache), IntPolynomial((1, 0, 1))):
        assert is_hyperbolic(p.scale(factor)) == is_hyperbolic(p)


def test_turan_shift_validation(pl_cache):
    with pytest.raises(InvalidArgumentError):
        turan_check_range(2, 0, 5, pl_cache)
    shifted = turan_check_range(2, 0, 5, pl_cache, shift=0)
    assert [record.n for record in shifted.records] == list(range(0, 6))


def test_hermite_renormalization(pl_cache):
    data = hermite_renormalize(2, 150, pl_cache)
    assert data.delta_n > 0
    assert abs(data.renormalized_coeffs[-1] - 1) < 0.01
    assert abs(data.renormalized_coeffs[1]) < 0.2
    farther = hermite_renormalize(2, 900, pl_cache)
    assert farther.hermite_distance < data.hermite_distance


@pytest.fixture(scope="module")
def hermite_cache():
    from exact_sequence import pl_values

    return pl_values(8010)


@pytest.mark.slow
@pytest.mark.parametrize("d", [3, 4, 5])
def test_hermite_distance_decreases(d, hermite_cache):
    distances = [hermite_renormalize(d, n, hermite_cache).hermite_distance for n in (500, 1000, 2000, 4000, 8000)]
    assert all(later < earlier for earlier, later in zip(distances, distances[1:])), distances
