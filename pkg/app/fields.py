"""Coefficient fields: GF(p) for a prime p and the rationals.

Scalars are plain Python values: canonical ``int`` representatives in ``[0, p)`` for
GF(p), and ``fractions.Fraction`` for the rationals. The field object carries all
arithmetic, so no floating point ever enters a computation.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime

from app.constants import MAX_PRIME
from app.exceptions import FieldMismatchError, InvalidFieldError

Scalar = int | Fraction


class Field(ABC):
    """Exact coefficient field."""

    @property
    @abstractmethod
    def characteristic(self) -> int:
        """Characteristic of the field (0 for the rationals)."""

    @property
    @abstractmethod
    def descriptor(self) -> str:
        """Field line payload as written in input files, e.g. ``gf 7`` or ``q``."""

    @abstractmethod
    def coerce(self, value: int | Fraction) -> Scalar:
        """Map an integer or rational into the field."""

    @abstractmethod
    def inv(self, a: Scalar) -> Scalar:
        """Multiplicative inverse of a nonzero scalar."""

    @abstractmethod
    def format(self, a: Scalar) -> str:
        """Canonical textual form of a scalar."""

    @property
    def zero(self) -> Scalar:
        return self.coerce(0)

    @property
    def one(self) -> Scalar:
        return self.coerce(1)

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return self.coerce(a + b)

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return self.coerce(a - b)

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return self.coerce(a * b)

    def neg(self, a: Scalar) -> Scalar:
        return self.coerce(-a)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def is_zero(self, a: Scalar) -> bool:
        return a == 0

    def require_same(self, other: Field) -> None:
        """Raise FieldMismatchError unless ``other`` is this field."""
        if self != other:
            raise FieldMismatchError(f"Field mismatch: {self.descriptor} vs {other.descriptor}")


@dataclass(frozen=True)
class PrimeField(Field):
    """The prime field GF(p)."""

    p: int

    def __post_init__(self) -> None:
        if not 2 <= self.p < MAX_PRIME or not isprime(self.p):
            raise InvalidFieldError(f"Modulus must be a prime below 2^31, got {self.p}")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def descriptor(self) -> str:
        return f"gf {self.p}"

    def coerce(self, value: int | Fraction) -> int:
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise InvalidFieldError(f"{value} has no image in GF({self.p})")
            return (value.numerator * pow(value.denominator, -1, self.p)) % self.p
        return int(value) % self.p

    def inv(self, a: Scalar) -> int:
        a = self.coerce(a)
        if a == 0:
            raise ZeroDivisionError("Inverse of zero in GF(p)")
        return pow(a, -1, self.p)

    def format(self, a: Scalar) -> str:
        return str(self.coerce(a))


@dataclass(frozen=True)
class RationalField(Field):
    """The rationals with arbitrary-precision numerators and denominators."""

    @property
    def characteristic(self) -> int:
        return 0

    @property
    def descriptor(self) -> str:
        return "q"

    def coerce(self, value: int | Fraction) -> Fraction:
        return Fraction(value)

    def inv(self, a: Scalar) -> Fraction:
        if a == 0:
            raise ZeroDivisionError("Inverse of zero in Q")
        return 1 / Fraction(a)

    def format(self, a: Scalar) -> str:
        return str(Fraction(a))


QQ = RationalField()


def field_from_descriptor(tokens: list[str]) -> Field:
    """Build a field from the tokens following ``field`` in an input file.

    Args:
        tokens: ``["gf", "<p>"]`` or ``["q"]``.

    Returns:
        Field: The described field.

    Raises:
        InvalidFieldError: On an unknown descriptor or a non-prime modulus.
    """
    match tokens:
        case ["q"]:
            return QQ
        case ["gf", modulus] if modulus.isdigit():
            return PrimeField(int(modulus))
        case _:
            raise InvalidFieldError(f"Unknown field descriptor: {' '.join(tokens)!r}")
