"""Formal power series in t with exact rational coefficients, truncated at t^N.

Every operation between series of different orders truncates to the smaller order, so a
result never claims more coefficients than both operands determine.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction

from app.exceptions import ParameterRangeError


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients a_0..a_N of an element of Q[[t]] modulo t^(N+1)."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.coefficients:
            raise ParameterRangeError("A truncated series needs at least the constant coefficient")

    @classmethod
    def of(cls, values: Iterable[int | Fraction], order: int) -> TruncatedSeries:
        """Series with the given leading coefficients, zero padded or cut to ``order``."""
        if order < 0:
            raise ParameterRangeError(f"Truncation order must be nonnegative, got {order}")
        head = [Fraction(v) for v in values][: order + 1]
        return cls(tuple(head + [Fraction(0)] * (order + 1 - len(head))))

    @classmethod
    def polynomial(cls, terms: Mapping[int, int | Fraction], order: int) -> TruncatedSeries:
        """Series from a sparse map exponent -> coefficient; exponents above ``order`` are dropped."""
        values = [Fraction(0)] * (order + 1)
        for exponent, coefficient in terms.items():
            if exponent < 0:
                raise ParameterRangeError(f"Negative exponent {exponent}")
            if exponent <= order:
                values[exponent] += Fraction(coefficient)
        return cls.of(values, order)

    @classmethod
    def zero(cls, order: int) -> TruncatedSeries:
        return cls.of((), order)

    @classmethod
    def one(cls, order: int) -> TruncatedSeries:
        return cls.of((1,), order)

    @classmethod
    def geometric(cls, ratio: int | Fraction, order: int) -> TruncatedSeries:
        """(1 - ratio*t)^-1 = sum ratio^n t^n."""
        return cls.of((Fraction(ratio) ** n for n in range(order + 1)), order)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            return Fraction(0)
        return self.coefficients[n]

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise ParameterRangeError(f"Cannot extend a series of order {self.order} to {order}")
        return TruncatedSeries(self.coefficients[: order + 1])

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coefficients)

    def evaluate(self, t: Fraction) -> Fraction:
        """Exact value of the truncation as a polynomial at ``t``."""
        total = Fraction(0)
        for coefficient in reversed(self.coefficients):
            total = total * t + coefficient
        return total

    def scale(self, c: int | Fraction) -> TruncatedSeries:
        return TruncatedSeries(tuple(Fraction(c) * a for a in self.coefficients))

    def render(self, variable: str = "t") -> str:
        """Human readable form such as ``1 + 2t - t^3``; zero terms are omitted."""
        pieces: list[str] = []
        for n, c in enumerate(self.coefficients):
            if c == 0:
                continue
            magnitude = abs(c)
            power = "" if n == 0 else (variable if n == 1 else f"{variable}^{n}")
            if not power:
                term = str(magnitude)
            elif magnitude == 1:
                term = power
            else:
                term = f"{magnitude}*{power}" if magnitude.denominator != 1 else f"{magnitude}{power}"
            if not pieces:
                pieces.append(f"-{term}" if c < 0 else term)
            else:
                pieces.append(f"{'-' if c < 0 else '+'} {term}")
        return " ".join(pieces) if pieces else "0"

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_add(self, other)

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_sub(self, other)

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_mul(self, other)

    def __neg__(self) -> TruncatedSeries:
        return self.scale(-1)


def _common_order(a: TruncatedSeries, b: TruncatedSeries) -> int:
    return min(a.order, b.order)


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    order = _common_order(a, b)
    return TruncatedSeries(tuple(a[n] + b[n] for n in range(order + 1)))


def series_sub(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    order = _common_order(a, b)
    return TruncatedSeries(tuple(a[n] - b[n] for n in range(order + 1)))


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product modulo t^(N+1)."""
    order = _common_order(a, b)
    return TruncatedSeries(tuple(sum((a[i] * b[n - i] for i in range(n + 1)), Fraction(0)) for n in range(order + 1)))


def series_inverse(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse via b_0 = 1/a_0, b_n = -(sum_{i>=1} a_i b_{n-i}) / a_0.

    Raises:
        ParameterRangeError: If a_0 = 0, so that no inverse exists.
    """
    if a[0] == 0:
        raise ParameterRangeError("A series with zero constant term has no inverse")
    inverse = [1 / a[0]]
    for n in range(1, a.order + 1):
        inverse.append(-sum((a[i] * inverse[n - i] for i in range(1, n + 1)), Fraction(0)) / a[0])
    return TruncatedSeries(tuple(inverse))


def series_divide(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return series_mul(a, series_inverse(b))


def succeq(a: TruncatedSeries, b: TruncatedSeries) -> bool:
    """a >= b in the positivity order: every coefficient of a - b is nonnegative."""
    return series_sub(a, b).is_nonnegative()
