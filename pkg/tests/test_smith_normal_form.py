"""Tests for the Smith normal form and the abelianization checks."""

import random

import pytest
from sympy import ZZ, Matrix
from sympy.matrices.normalforms import invariant_factors

from app.exceptions import InternalInconsistencyError
from app.group_words import parse_group_presentation
from app.smith_normal_form import PGroupVerdict, abelianization_rank, gs_pgroup_report, mod_p_rank, smith_normal_form


def sympy_factors(rows: list[list[int]]) -> list[int]:
    return sorted(abs(int(f)) for f in invariant_factors(Matrix(rows), domain=ZZ) if f != 0)


class TestSmithNormalForm:
    """Tests for SmithNormalForm."""

    def test_textbook_example(self) -> None:
        """Test a 3x3 matrix with invariant factors 2, 6, 12."""
        snf = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
        assert snf.invariant_factors == [2, 6, 12]
        assert snf.verify()

    def test_random_matrices_match_sympy(self) -> None:
        """Test 100 random integer matrices against sympy's invariant factors."""
        rng = random.Random(17)
        for _ in range(100):
            nrows, ncols = rng.randint(1, 5), rng.randint(1, 5)
            rows = [[rng.randint(-9, 9) for _ in range(ncols)] for _ in range(nrows)]
            snf = smith_normal_form(rows)
            assert snf.invariant_factors == sympy_factors(rows), rows
            assert snf.verify()

    def test_divisibility_chain(self) -> None:
        """Test d_i | d_(i+1) on a diagonal input that is not yet in normal form."""
        snf = smith_normal_form([[4, 0], [0, 6]])
        assert snf.invariant_factors == [2, 12]

    def test_large_entries(self) -> None:
        """Test that Python integers avoid overflow."""
        big = 2**70
        snf = smith_normal_form([[big, 0], [0, big * 3]])
        assert snf.invariant_factors == [big, 3 * big]
        assert snf.verify()

    def test_zero_matrix_and_no_rows(self) -> None:
        """Test matrices without nonzero invariant factors."""
        assert smith_normal_form([[0, 0], [0, 0]]).invariant_factors == []
        empty = smith_normal_form([], ncols=2)
        assert empty.invariant_factors == []
        assert empty.shape == (0, 2)
        assert empty.verify()


class TestAbelianization:
    """Tests for abelianization_rank and mod_p_rank."""

    def test_klein(self) -> None:
        """Test <x, y | x^2, y^2, (xy)^2> with abelianization Z/2 x Z/2."""
        report = abelianization_rank(parse_group_presentation("gen x\ngen y\nrel x^2\nrel y^2\nrel x*y*x*y\n"))
        assert report.torsion == [2, 2]
        assert report.d_ab == 2
        assert report.is_finite
        assert report.free_rank == 0

    def test_free_abelian(self) -> None:
        """Test that the commutator leaves Z^2."""
        report = abelianization_rank(parse_group_presentation("gen x\ngen y\nrel x*y*x^-1*y^-1\n"))
        assert report.invariant_factors == []
        assert report.d_ab == 2
        assert not report.is_finite
        assert report.free_rank == 2

    def test_cyclic(self) -> None:
        """Test Z/6 from x^6."""
        report = abelianization_rank(parse_group_presentation("gen x\nrel x^6\n"))
        assert report.invariant_factors == [6]
        assert report.d_ab == 1

    def test_trivial(self) -> None:
        """Test that x and y killed outright gives d(G^ab) = 0."""
        report = abelianization_rank(parse_group_presentation("gen x\ngen y\nrel x\nrel y\n"))
        assert report.invariant_factors == [1, 1]
        assert report.d_ab == 0

    @pytest.mark.parametrize(("p", "expected"), [(2, 1), (3, 1), (5, 0)])
    def test_mod_p_rank(self, p: int, expected: int) -> None:
        """Test dim GF(p) (x) Z/6."""
        assert mod_p_rank(parse_group_presentation("gen x\nrel x^6\n"), p) == expected

    def test_rank_cross_check_over_q(self, mocker) -> None:
        """Test that a factor count disagreeing with the rational rank is reported."""
        mocker.patch("app.smith_normal_form.smith_normal_form", return_value=mocker.Mock(invariant_factors=[2, 3]))
        with pytest.raises(InternalInconsistencyError, match="rank 1 over Q"):
            abelianization_rank(parse_group_presentation("gen x\nrel x^6\n"))

    def test_rank_cross_check_mod_p(self, mocker) -> None:
        """Test that a factor prime to p that the reduced matrix contradicts is reported."""
        mocker.patch("app.smith_normal_form.smith_normal_form", return_value=mocker.Mock(invariant_factors=[1]))
        with pytest.raises(InternalInconsistencyError, match="GF\\(3\\)"):
            mod_p_rank(parse_group_presentation("gen x\nrel x^6\n"), 3)


class TestPGroupReport:
    """Tests for the relation-count bound for finite p-groups."""

    def test_klein_is_consistent(self) -> None:
        """Test 3 relations against the threshold 1."""
        report = gs_pgroup_report(parse_group_presentation("gen x\ngen y\nrel x^2\nrel y^2\nrel x*y*x*y\n"))
        assert report.verdict == PGroupVerdict.CONSISTENT_WITH_FINITE
        assert report.exceeds_threshold

    def test_commutator_is_trivial_or_infinite(self) -> None:
        """Test one relation on two generators, at the threshold |X|^2/4 = 1."""
        report = gs_pgroup_report(parse_group_presentation("gen x\ngen y\nrel x*y*x^-1*y^-1\n"))
        assert report.verdict == PGroupVerdict.TRIVIAL_OR_INFINITE
        assert report.threshold == 1
        assert not report.exceeds_threshold
        assert report.serre_hypotheses_hold

    def test_not_minimal(self) -> None:
        """Test that a redundant generator makes the bound inapplicable."""
        report = gs_pgroup_report(parse_group_presentation("gen x\ngen y\nrel y\n"))
        assert report.d_ab == 1
        assert report.verdict == PGroupVerdict.NOT_APPLICABLE
