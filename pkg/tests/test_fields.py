"""Tests for the exact coefficient fields."""

from fractions import Fraction

import pytest

from app.exceptions import FieldMismatchError, InvalidFieldError
from app.fields import QQ, PrimeField, field_from_descriptor


class TestPrimeField:
    """Tests for arithmetic in GF(p)."""

    @pytest.mark.parametrize("p", [0, 1, 4, 9, 2**31 + 11])
    def test_rejects_non_primes(self, p: int) -> None:
        """Test that composite, tiny and oversized moduli are rejected."""
        with pytest.raises(InvalidFieldError):
            PrimeField(p)

    def test_canonical_representatives(self) -> None:
        """Test that coercion lands in [0, p)."""
        field = PrimeField(7)
        assert field.coerce(-1) == 6
        assert field.coerce(15) == 1
        assert field.add(5, 4) == 2
        assert field.mul(3, 5) == 1
        assert field.neg(0) == 0

    def test_rational_coercion(self) -> None:
        """Test that p/q maps to p * q^-1 and fails when p divides q."""
        field = PrimeField(7)
        assert field.coerce(Fraction(1, 2)) == 4
        with pytest.raises(InvalidFieldError):
            field.coerce(Fraction(1, 7))

    def test_inverse(self) -> None:
        """Test inverses of every nonzero element of GF(11)."""
        field = PrimeField(11)
        for a in range(1, 11):
            assert field.mul(a, field.inv(a)) == 1
        with pytest.raises(ZeroDivisionError):
            field.inv(0)

    def test_large_prime(self) -> None:
        """Test the largest prime below 2^31."""
        p = 2**31 - 1
        field = PrimeField(p)
        assert field.mul(p - 1, p - 1) == 1
        assert field.format(p + 3) == "3"


class TestRationalField:
    """Tests for the rationals."""

    def test_arithmetic_is_exact(self) -> None:
        """Test that no precision is lost."""
        assert QQ.add(Fraction(1, 3), Fraction(1, 6)) == Fraction(1, 2)
        assert QQ.div(1, 3) == Fraction(1, 3)
        assert QQ.format(Fraction(-2, 4)) == "-1/2"
        assert QQ.characteristic == 0

    def test_inverse_of_zero(self) -> None:
        """Test that zero has no inverse."""
        with pytest.raises(ZeroDivisionError):
            QQ.inv(0)


class TestFieldDescriptor:
    """Tests for field_from_descriptor and field comparisons."""

    @pytest.mark.parametrize(
        ("tokens", "expected"),
        [
            (["q"], QQ),
            (["gf", "2"], PrimeField(2)),
            (["gf", "101"], PrimeField(101)),
        ],
    )
    def test_valid_descriptors(self, tokens: list[str], expected: object) -> None:
        """Test that valid descriptors build the expected field."""
        assert field_from_descriptor(tokens) == expected

    @pytest.mark.parametrize("tokens", [[], ["gf"], ["gf", "x"], ["r"], ["gf", "6"], ["q", "1"]])
    def test_invalid_descriptors(self, tokens: list[str]) -> None:
        """Test that malformed descriptors and non-prime moduli are rejected."""
        with pytest.raises(InvalidFieldError):
            field_from_descriptor(tokens)

    def test_mismatch(self) -> None:
        """Test that different fields refuse to mix."""
        PrimeField(3).require_same(PrimeField(3))
        with pytest.raises(FieldMismatchError):
            PrimeField(3).require_same(PrimeField(5))
        with pytest.raises(FieldMismatchError):
            QQ.require_same(PrimeField(5))
