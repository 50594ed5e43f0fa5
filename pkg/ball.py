"""
Ball arithmetic for certified bounds.

A BallReal wraps an mpmath interval (``mpmath.iv.mpf``); every operation rounds
outward, so the true value always stays inside. Ordering comparisons are decided
only when the two intervals are disjoint and raise InconclusiveError otherwise.
"""

from contextlib import contextmanager
from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, Union

from mpmath import iv, mp

from utils import InconclusiveError, InvalidArgumentError

BallLike = Union["BallReal", int, Fraction, float, str]


@contextmanager
def working_precision(bits: int) -> Iterator[None]:
    """Run the enclosed ball arithmetic at `bits` of working precision."""
    saved = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = saved


def current_precision() -> int:
    return iv.prec


def _to_interval(value: BallLike):
    if isinstance(value, BallReal):
        return value.iv
    if isinstance(value, Fraction):
        return iv.mpf(value.numerator) / value.denominator
    return iv.mpf(value)


class BallReal:
    """Real number known to lie in a closed interval with outward-rounded endpoints."""

    __slots__ = ("iv",)

    def __init__(self, value: BallLike = 0):
        self.iv = _to_interval(value)

    @classmethod
    def from_interval(cls, lower, upper) -> "BallReal":
        return cls(iv.mpf((lower, upper)))

    @classmethod
    def from_midpoint_radius(cls, midpoint, radius) -> "BallReal":
        mid = mp.mpf(midpoint)
        rad = abs(mp.mpf(radius))
        lower = mp.fsub(mid, rad, prec=iv.prec, rounding="d")
        upper = mp.fadd(mid, rad, prec=iv.prec, rounding="u")
        return cls(iv.mpf((lower, upper)))

    @classmethod
    def hull(cls, balls: Iterable["BallReal"]) -> "BallReal":
        balls = list(balls)
        if not balls:
            raise InvalidArgumentError("hull of no balls")
        lower = min((b.lower for b in balls))
        upper = max((b.upper for b in balls))
        return cls.from_interval(lower, upper)

    # endpoints and shape

    @property
    def lower(self):
        return mp.make_mpf(self.iv._mpi_[0])

    @property
    def upper(self):
        return mp.make_mpf(self.iv._mpi_[1])

    @property
    def midpoint(self):
        return mp.ldexp(mp.fadd(self.lower, self.upper, exact=True), -1)

    @property
    def radius(self):
        return mp.fsub(self.upper, self.midpoint, exact=True)

    def is_finite(self) -> bool:
        return bool(mp.isfinite(self.lower) and mp.isfinite(self.upper))

    def contains(self, value: BallLike) -> bool:
        other = BallReal(value)
        return self.lower <= other.lower and other.upper <= self.upper

    def overlaps(self, other: BallLike) -> bool:
        other = BallReal(other)
        return not (self.upper < other.lower or other.upper < self.lower)

    def upper_ball(self) -> "BallReal":
        """Degenerate ball at the upper endpoint, used when only an upper bound matters."""
        return BallReal.from_interval(self.upper, self.upper)

    # certified predicates

    def certainly_lt(self, other: BallLike) -> bool:
        return self.upper < BallReal(other).lower

    def certainly_le(self, other: BallLike) -> bool:
        return self.upper <= BallReal(other).lower

    def certainly_positive(self) -> bool:
        return self.lower > 0

    def certainly_negative(self) -> bool:
        return self.upper < 0

    def _decide(self, other: BallLike, strict: bool) -> bool:
        other = BallReal(other)
        if (self.upper < other.lower) if strict else (self.upper <= other.lower):
            return True
        if (self.lower >= other.upper) if strict else (self.lower > other.upper):
            return False
        raise InconclusiveError(f"cannot order {self} and {other} at {iv.prec} bits")

    def __lt__(self, other: BallLike) -> bool:
        return self._decide(other, strict=True)

    def __le__(self, other: BallLike) -> bool:
        return self._decide(other, strict=False)

    def __gt__(self, other: BallLike) -> bool:
        return BallReal(other)._decide(self, strict=True)

    def __ge__(self, other: BallLike) -> bool:
        return BallReal(other)._decide(self, strict=False)

    # arithmetic

    def __add__(self, other: BallLike) -> "BallReal":
        return BallReal(self.iv + _to_interval(other))

    __radd__ = __add__

    def __sub__(self, other: BallLike) -> "BallReal":
        return BallReal(self.iv - _to_interval(other))

    def __rsub__(self, other: BallLike) -> "BallReal":
        return BallReal(_to_interval(other) - self.iv)

    def __mul__(self, other: BallLike) -> "BallReal":
        return BallReal(self.iv * _to_interval(other))

    __rmul__ = __mul__

    def __truediv__(self, other: BallLike) -> "BallReal":
        divisor = BallReal(other)
        if divisor.lower <= 0 <= divisor.upper:
            raise InvalidArgumentError(f"division by a ball containing zero: {divisor}")
        return BallReal(self.iv / divisor.iv)

    def __rtruediv__(self, other: BallLike) -> "BallReal":
        return BallReal(other) / self

    def __neg__(self) -> "BallReal":
        return BallReal(-self.iv)

    def __pos__(self) -> "BallReal":
        return self

    def __abs__(self) -> "BallReal":
        return BallReal(abs(self.iv))

    def __pow__(self, exponent: BallLike) -> "BallReal":
        if isinstance(exponent, int):
            return BallReal(self.iv ** exponent)
        return power(self, exponent)

    def __float__(self) -> float:
        return float(self.midpoint)

    # display

    def format(self, digits: int = 12) -> str:
        if not self.is_finite():
            return f"[{mp.nstr(self.lower, digits)}, {mp.nstr(self.upper, digits)}]"
        return f"{mp.nstr(self.midpoint, digits)} ± {mp.nstr(self.radius, 3)}"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"BallReal({self.format(20)})"


def as_ball(value: BallLike) -> BallReal:
    return value if isinstance(value, BallReal) else BallReal(value)


def pi() -> BallReal:
    return BallReal(iv.pi)


def exp(x: BallLike) -> BallReal:
    return BallReal(iv.exp(as_ball(x).iv))


def log(x: BallLike) -> BallReal:
    x = as_ball(x)
    if not x.certainly_positive():
        raise InvalidArgumentError(f"log of a ball not certainly positive: {x}")
    return BallReal(iv.ln(x.iv))


def sqrt(x: BallLike) -> BallReal:
    x = as_ball(x)
    if x.certainly_negative():
        raise InvalidArgumentError(f"sqrt of a negative ball: {x}")
    if x.lower < 0:
        x = BallReal.from_interval(0, x.upper)
    return BallReal(iv.sqrt(x.iv))


def power(x: BallLike, exponent: BallLike) -> BallReal:
    """x ** exponent for real exponents; x must be certainly positive."""
    if isinstance(exponent, int):
        return as_ball(x) ** exponent
    return exp(as_ball(exponent) * log(x))


def cbrt(x: BallLike) -> BallReal:
    return power(x, Fraction(1, 3))


def cos(x: BallLike) -> BallReal:
    return BallReal(iv.cos(as_ball(x).iv))


def glaisher() -> BallReal:
    return BallReal(iv.glaisher)


def half_integer_gamma(m: int) -> BallReal:
    """Gamma(m + 1/2) = (2m)! sqrt(pi) / (4^m m!)."""
    if m < 0:
        raise InvalidArgumentError("half_integer_gamma needs m >= 0")
    return Fraction(factorial(2 * m), 4 ** m * factorial(m)) * sqrt(pi())

