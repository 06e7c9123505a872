"""Tests for truncated power series with rational coefficients."""

from fractions import Fraction

import pytest

from app.exceptions import ParameterRangeError
from app.truncated_series import TruncatedSeries, series_divide, series_inverse, series_mul, succeq


class TestConstruction:
    """Tests for the constructors."""

    def test_of_pads_and_cuts(self) -> None:
        """Test zero padding and truncation to the order."""
        assert TruncatedSeries.of([1, 2], 3).coefficients == (1, 2, 0, 0)
        assert TruncatedSeries.of([1, 2, 3, 4, 5], 2).coefficients == (1, 2, 3)

    def test_polynomial_drops_high_terms(self) -> None:
        """Test that exponents above the order are dropped."""
        assert TruncatedSeries.polynomial({0: 1, 2: 3, 9: 1}, 3).coefficients == (1, 0, 3, 0)

    def test_geometric(self) -> None:
        """Test (1 - 2t)^-1."""
        assert TruncatedSeries.geometric(2, 4).coefficients == (1, 2, 4, 8, 16)

    @pytest.mark.parametrize("order", [-1, -5])
    def test_negative_order(self, order: int) -> None:
        """Test that a negative order is rejected."""
        with pytest.raises(ParameterRangeError):
            TruncatedSeries.of([1], order)


class TestArithmetic:
    """Tests for products, inverses and the positivity order."""

    def test_mixed_orders_truncate(self) -> None:
        """Test that operands of different orders truncate to the smaller one."""
        a = TruncatedSeries.of([1, 1, 1, 1, 1], 4)
        b = TruncatedSeries.of([1, 1], 1)
        assert (a + b).order == 1
        assert series_mul(a, b).coefficients == (1, 2)

    def test_inverse_of_one_minus_t(self) -> None:
        """Test (1 - t)^-1 = sum t^n."""
        inverse = series_inverse(TruncatedSeries.of([1, -1], 5))
        assert inverse.coefficients == (1,) * 6

    def test_inverse_round_trip(self) -> None:
        """Test a * a^-1 = 1 for a series with rational constant term."""
        a = TruncatedSeries.of([Fraction(2, 3), -1, Fraction(1, 5), 7], 6)
        assert a * series_inverse(a) == TruncatedSeries.one(6)

    def test_zero_constant_term(self) -> None:
        """Test that t has no inverse."""
        with pytest.raises(ParameterRangeError):
            series_inverse(TruncatedSeries.of([0, 1], 3))

    def test_divide(self) -> None:
        """Test (1 - t^2) / (1 - t) = 1 + t."""
        quotient = series_divide(TruncatedSeries.of([1, 0, -1], 4), TruncatedSeries.of([1, -1], 4))
        assert quotient.coefficients == (1, 1, 0, 0, 0)

    def test_succeq(self) -> None:
        """Test the coefficientwise order."""
        one = TruncatedSeries.one(3)
        assert succeq(TruncatedSeries.of([1, 0, 2], 3), one)
        assert not succeq(TruncatedSeries.of([1, -1], 3), one)

    def test_evaluate_is_exact(self) -> None:
        """Test evaluation of 1 - 4t + 5t^2 at 1/2."""
        series = TruncatedSeries.of([1, -4, 5], 2)
        assert series.evaluate(Fraction(1, 2)) == Fraction(1, 4)

    def test_render(self) -> None:
        """Test the human readable form."""
        assert TruncatedSeries.of([1, -2, 0, Fraction(1, 2)], 3).render() == "1 - 2t + 1/2*t^3"
        assert TruncatedSeries.zero(2).render() == "0"
        assert TruncatedSeries.of([0, -1], 1).render() == "-t"
