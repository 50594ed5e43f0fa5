import math
import pathlib
import sys
from fractions import Fraction

import pytest

ROOT_DIR = pathlib.Path(__file__).resolve().parent.parent
if str(ROOT_DIR) not in sys.path:
    sys.path.insert(0, str(ROOT_DIR))

from ball import BallReal, exp, half_integer_gamma, log, pi, power, sqrt, working_precision
from constants_kernel import zeta3
from series import TruncatedSeries
from utils import InconclusiveError, InvalidArgumentError


def test_arithmetic_encloses_exact_value():
    with working_precision(64):
        third = BallReal(1) / 3
        assert third.contains(Fraction(1, 3))
        assert (third * 3).contains(1)
        assert third.radius > 0


def test_comparisons_decide_only_disjoint_balls():
    wide = BallReal.from_interval(0, 2)
    assert BallReal(3) > wide
    assert wide.certainly_lt(3)
    assert not wide.certainly_lt(1)
    with pytest.raises(InconclusiveError):
        wide < BallReal(1)


def test_from_midpoint_radius():
    ball = BallReal.from_midpoint_radius(10, 0.5)
    assert ball.lower <= 9.5 and ball.upper >= 10.5
    assert ball.contains(10)


def test_elementary_functions():
    with working_precision(128):
        assert abs(float(pi()) - math.pi) < 1e-15
        assert exp(log(BallReal(7))).contains(7)
        assert abs(float(power(8, Fraction(1, 3))) - 2) < 1e-15
        assert abs(float(sqrt(2)) ** 2 - 2) < 1e-15


def test_narrower_input_gives_nested_result():
    def f(x):
        return exp(x) * x - log(x) + sqrt(x) / (x + 1)

    with working_precision(64):
        outer = f(BallReal.from_interval(1, 2))
        inner = f(BallReal.from_interval(1.25, 1.5))
        point = f(BallReal(Fraction(4, 3)))
    assert outer.lower <= inner.lower <= point.lower
    assert point.upper <= inner.upper <= outer.upper


def test_zeta3_tightens_with_precision():
    balls = [zeta3(bits) for bits in (64, 128, 256)]
    assert balls[0].radius > balls[1].radius > balls[2].radius
    for i, coarse in enumerate(balls):
        for fine in balls[i + 1:]:
            assert coarse.overlaps(fine)


def test_log_needs_positive_ball():
    with pytest.raises(InvalidArgumentError):
        log(BallReal.from_interval(-1, 1))


def test_half_integer_gamma():
    assert abs(float(half_integer_gamma(0)) - math.sqrt(math.pi)) < 1e-14
    assert abs(float(half_integer_gamma(1)) - math.sqrt(math.pi) / 2) < 1e-14
    assert abs(float(half_integer_gamma(3)) - math.gamma(3.5)) < 1e-12


def test_upper_ball_is_degenerate():
    ball = BallReal.from_interval(1, 2).upper_ball()
    assert ball.lower == ball.upper == 2


def test_series_exp_log_inverse():
    s = TruncatedSeries([0, Fraction(1, 2), Fraction(-1, 3), 2], 3)
    assert s.exp().log() == s


def test_series_binomial_power():
    root = TruncatedSeries([1, 1], 6).binomial_power(Fraction(1, 2))
    assert root * root == TruncatedSeries([1, 1], 6)
    assert root[2] == Fraction(-1, 8)


def test_series_compose_and_evaluate():
    geometric = TruncatedSeries([1, 1, 1, 1], 3)
    doubled = geometric.compose(TruncatedSeries([0, 2], 3))
    assert list(doubled) == [1, 2, 4, 8]
    assert geometric(Fraction(1, 2)) == Fraction(15, 8)


def test_series_reciprocal_and_calculus():
    s = TruncatedSeries([1, -1], 4)
    assert list(s.reciprocal()) == [1, 1, 1, 1, 1]
    assert list(TruncatedSeries([5, 2, 3], 2).deriv()) == [2, 6]
    assert list(TruncatedSeries([2, 6], 1).integ(5)) == [5, 2, 3]


def test_series_rejects_bad_constant_terms():
    with pytest.raises(InvalidArgumentError):
        TruncatedSeries([1, 1], 2).exp()
    with pytest.raises(InvalidArgumentError):
        TruncatedSeries([2, 1], 2).log()
    with pytest.raises(InvalidArgumentError):
        TruncatedSeries([0, 1], 2).reciprocal()
