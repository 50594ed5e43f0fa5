"""
Truncated formal power series.

``TruncatedSeries(c, order)`` represents c[0] + c[1] y + ... + c[order] y**order,
exact up to its order. Coefficients may be any type closed under ordinary
arithmetic with ints: ``Fraction`` for exact work, ``BallReal`` for certified
enclosures. Binary operations truncate to the smaller of the two orders.
"""

from fractions import Fraction
from typing import Any, Iterable, Iterator, List, Optional

from utils import InvalidArgumentError


class TruncatedSeries:
    """Power series truncated at a fixed order."""

    __slots__ = ("c",)

    def __init__(self, c: Optional[Iterable[Any]] = None, order: Optional[int] = None):
        coeffs = list(c) if c is not None else [0]
        if order is None:
            if not coeffs:
                raise InvalidArgumentError("empty coefficient list")
            order = len(coeffs) - 1
        if order < 0:
            raise InvalidArgumentError(f"order cannot be less than zero: order = {order}")
        coeffs = coeffs[:order + 1]
        coeffs.extend([0] * (order + 1 - len(coeffs)))
        self.c: List[Any] = coeffs

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls([1], order)

    @property
    def order(self) -> int:
        return len(self.c) - 1

    def __getitem__(self, i: int) -> Any:
        return self.c[i]

    def __iter__(self) -> Iterator[Any]:
        return iter(self.c)

    def __len__(self) -> int:
        return len(self.c)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.c == other.c

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.c!r})"

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.c, min(order, self.order))

    # ring operations

    def __add__(self, other: Any) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            order = min(self.order, other.order)
            return TruncatedSeries([self.c[k] + other.c[k] for k in range(order + 1)])
        coeffs = list(self.c)
        coeffs[0] = coeffs[0] + other
        return TruncatedSeries(coeffs)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries([-a for a in self.c])

    def __sub__(self, other: Any) -> "TruncatedSeries":
        return self + (-other)

    def __rsub__(self, other: Any) -> "TruncatedSeries":
        return (-self) + other

    def __mul__(self, other: Any) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            order = min(self.order, other.order)
            coeffs = []
            for k in range(order + 1):
                total = self.c[0] * other.c[k]
                for j in range(1, k + 1):
                    total = total + self.c[j] * other.c[k - j]
                coeffs.append(total)
            return TruncatedSeries(coeffs)
        return TruncatedSeries([a * other for a in self.c])

    __rmul__ = __mul__

    def reciprocal(self) -> "TruncatedSeries":
        """1/S; the constant term must be invertible."""
        c0 = self.c[0]
        if isinstance(c0, (int, Fraction)) and c0 == 0:
            raise InvalidArgumentError("reciprocal of a series with zero constant term")
        inv = [1 / c0 if not isinstance(c0, int) else Fraction(1, c0)]
        for k in range(1, self.order + 1):
            total = self.c[1] * inv[k - 1]
            for j in range(2, k + 1):
                total = total + self.c[j] * inv[k - j]
            inv.append(-total * inv[0])
        return TruncatedSeries(inv)

    def __truediv__(self, other: Any) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return self * other.reciprocal()
        if isinstance(other, int):
            other = Fraction(other)
        return TruncatedSeries([a / other for a in self.c])

    def __pow__(self, exponent: int) -> "TruncatedSeries":
        if not isinstance(exponent, int):
            return self.binomial_power(exponent)
        if exponent < 0:
            return self.reciprocal() ** (-exponent)
        result = TruncatedSeries.one(self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # transcendental operations (online recurrences)

    def exp(self) -> "TruncatedSeries":
        """exp(S) for S with zero constant term: k f_k = sum_j j s_j f_{k-j}."""
        self._require_constant(0, "exp")
        f = [Fraction(1) if self._exact() else 1]
        for k in range(1, self.order + 1):
            total = 0
            for j in range(1, k + 1):
                total = total + j * self.c[j] * f[k - j]
            f.append(total / k if not isinstance(total, int) else Fraction(total, k))
        return TruncatedSeries(f)

    def log(self) -> "TruncatedSeries":
        """log(S) for S with constant term 1, from L' = S'/S."""
        self._require_constant(1, "log")
        if self.order == 0:
            return TruncatedSeries([0], 0)
        return (self.deriv() / self.truncate(self.order - 1)).integ()

    def binomial_power(self, exponent: Any) -> "TruncatedSeries":
        """S**a for S with constant term 1: k f_k = sum_j (a j - (k - j)) s_j f_{k-j}."""
        self._require_constant(1, "binomial_power")
        f = [Fraction(1) if self._exact() else 1]
        for k in range(1, self.order + 1):
            total = 0
            for j in range(1, k + 1):
                total = total + (exponent * j - (k - j)) * self.c[j] * f[k - j]
            f.append(total / k if not isinstance(total, int) else Fraction(total, k))
        return TruncatedSeries(f)

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """S(P(y)) for P with zero constant term, by Horner's rule."""
        inner._require_constant(0, "compose")
        order = min(self.order, inner.order)
        result = TruncatedSeries([self.c[order]], order)
        for k in range(order - 1, -1, -1):
            result = result * inner + self.c[k]
        return result

    def deriv(self) -> "TruncatedSeries":
        if self.order == 0:
            return TruncatedSeries([0], 0)
        return TruncatedSeries([k * self.c[k] for k in range(1, self.order + 1)])

    def integ(self, constant: Any = 0) -> "TruncatedSeries":
        coeffs = [constant]
        for k, a in enumerate(self.c):
            coeffs.append(a / (k + 1) if not isinstance(a, int) else Fraction(a, k + 1))
        return TruncatedSeries(coeffs)

    def __call__(self, y: Any) -> Any:
        total = self.c[-1]
        for a in reversed(self.c[:-1]):
            total = total * y + a
        return total

    # helpers

    def _exact(self) -> bool:
        return all(isinstance(a, (int, Fraction)) for a in self.c)

    def _require_constant(self, value: int, operation: str) -> None:
        c0 = self.c[0]
        if isinstance(c0, (int, Fraction)):
            if c0 != value:
                raise InvalidArgumentError(f"{operation} needs constant term {value}, got {c0}")
        elif hasattr(c0, "contains") and not c0.contains(value):
            raise InvalidArgumentError(f"{operation} needs constant term {value}, got {c0}")
