"""Tests for the series certificates and the negative-value test."""

from fractions import Fraction
from pathlib import Path

import pytest

from app.certificates import CertificateKind, NegativeValueVerdict, Verdict, golod_bound, golod_certificate, golod_gamma, gs_series_check, key_lemma_check, negative_value_test, presentation_negative_value_test
from app.exceptions import NonzeroConstantTermError, ParameterRangeError
from app.presentation import Presentation, parse_presentation
from app.truncated_series import TruncatedSeries


class TestGsSeriesCheck:
    """Tests for (1 - h(X) + h(R)) H(B) >= 1."""

    @pytest.mark.parametrize("name", ["commutative2.alg", "free2.alg", "squares_gf2.alg", "weighted.alg", "zero_relation.alg"])
    def test_holds_on_samples(self, data_dir: Path, name: str) -> None:
        """Test that the certificate holds on every sample presentation."""
        certificate = gs_series_check(parse_presentation((data_dir / name).read_text()), 8)
        assert certificate.verdict == Verdict.CERTIFIED_TO_ORDER
        assert certificate.kind == CertificateKind.GS_INEQUALITY
        assert certificate.order == 8

    def test_free_algebra_product_is_one(self, data_dir: Path) -> None:
        """Test (1 - 2t) * sum 2^n t^n = 1 exactly."""
        certificate = gs_series_check(parse_presentation((data_dir / "free2.alg").read_text()), 6)
        assert certificate.coefficients == [1, 0, 0, 0, 0, 0, 0]

    def test_coefficients_serialize_as_text(self, commutative_pair: Presentation) -> None:
        """Test that exact coefficients travel through JSON as strings."""
        dumped = gs_series_check(commutative_pair, 3).model_dump(mode="json")
        assert all(isinstance(c, str) for c in dumped["coefficients"])
        assert dumped["verdict"] == "CertifiedToOrder"


class TestGolod:
    """Tests for the relation-count certificate."""

    @pytest.mark.parametrize("n", range(2, 12))
    def test_bound_k3_eps1(self, n: int) -> None:
        """Test that k = 3, epsilon = 1 admits one relation per degree."""
        assert golod_bound(3, Fraction(1), n) == 1

    def test_bound_k2_eps1(self) -> None:
        """Test that k = 2, epsilon = 1 admits nothing beyond degree 2."""
        assert golod_bound(2, Fraction(1), 2) == 1
        assert golod_bound(2, Fraction(1), 5) == 0

    def test_gamma(self) -> None:
        """Test gamma = t^2 / (1 - t) for k = 3 and epsilon = 1."""
        assert golod_gamma(3, Fraction(1), 5).coefficients == (0, 0, 1, 1, 1, 1)

    @pytest.mark.parametrize(("k", "epsilon"), [(3, Fraction(1)), (2, Fraction(1)), (4, Fraction(1, 2)), (5, Fraction(5, 2)), (2, Fraction(1, 3))])
    def test_certificate_holds(self, k: int, epsilon: Fraction) -> None:
        """Test that every closed-form identity holds exactly."""
        certificate = golod_certificate(k, epsilon, 15)
        assert all(certificate.checks.values()), certificate.checks
        assert certificate.verdict == Verdict.CERTIFIED_TO_ORDER

    def test_epsilon_zero(self) -> None:
        """Test that epsilon = 0 reduces to the free algebra and is noted."""
        certificate = golod_certificate(2, Fraction(0), 6)
        assert certificate.coefficients == [1, 2, 4, 8, 16, 32, 64]
        assert certificate.notes

    @pytest.mark.parametrize(("k", "epsilon", "n"), [(0, Fraction(0), 2), (2, Fraction(-1), 2), (2, Fraction(3, 2), 2), (3, Fraction(1), 1)])
    def test_parameter_ranges(self, k: int, epsilon: Fraction, n: int) -> None:
        """Test k >= 1, 0 <= epsilon <= k/2 and n >= 2."""
        with pytest.raises(ParameterRangeError):
            golod_bound(k, epsilon, n)


class TestKeyLemma:
    """Tests for key_lemma_check."""

    def test_golod_gamma_on_free_algebra(self, data_dir: Path) -> None:
        """Test gamma from k = 2, epsilon = 1/2 on the free algebra with two generators."""
        presentation = parse_presentation((data_dir / "free2.alg").read_text())
        certificate = key_lemma_check(presentation, golod_gamma(2, Fraction(1, 2), 10), 10)
        assert certificate.checks["gamma_succeq_relations"]
        assert certificate.checks["inverse_nonnegative"]
        assert certificate.verdict == Verdict.CERTIFIED_TO_ORDER

    def test_gamma_below_relations(self, commutative_pair: Presentation) -> None:
        """Test that gamma = 0 fails when there is a relation."""
        certificate = key_lemma_check(commutative_pair, TruncatedSeries.zero(6), 6)
        assert not certificate.checks["gamma_succeq_relations"]
        assert certificate.verdict == Verdict.INCONCLUSIVE

    def test_constant_gamma_rejected(self, commutative_pair: Presentation) -> None:
        """Test that gamma must have zero constant term."""
        with pytest.raises(NonzeroConstantTermError):
            key_lemma_check(commutative_pair, TruncatedSeries.one(4), 4)


class TestNegativeValue:
    """Tests for the negative-value test."""

    def test_no_witness(self) -> None:
        """Test 1 - 4t + 5t^2 at 1/2, which is 1/4."""
        report = negative_value_test(TruncatedSeries.of([0, 4], 2), TruncatedSeries.of([0, 0, 5], 2), [Fraction(1, 2)])
        assert report.verdict == NegativeValueVerdict.INCONCLUSIVE
        assert report.witness is None

    def test_witness(self) -> None:
        """Test 1 - 4t + 3t^2 at 1/2, which is -1/4."""
        report = negative_value_test(TruncatedSeries.of([0, 4], 2), TruncatedSeries.of([0, 0, 3], 2), [Fraction(1, 2)])
        assert report.verdict == NegativeValueVerdict.OBSTRUCTION
        assert report.witness == Fraction(1, 2)
        assert report.value == Fraction(-1, 4)

    @pytest.mark.parametrize("point", [Fraction(0), Fraction(1), Fraction(3, 2)])
    def test_grid_outside_unit_interval(self, point: Fraction) -> None:
        """Test that grid points must lie in (0, 1)."""
        with pytest.raises(ParameterRangeError):
            negative_value_test(TruncatedSeries.of([0, 1], 1), TruncatedSeries.zero(1), [point])

    def test_for_presentation(self, squares_gf2: Presentation) -> None:
        """Test 1 - 2t + 2t^2, which stays positive on the grid."""
        report = presentation_negative_value_test(squares_gf2, [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)])
        assert report.verdict == NegativeValueVerdict.INCONCLUSIVE
        assert len(report.grid) == 3
