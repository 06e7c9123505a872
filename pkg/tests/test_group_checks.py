"""Tests for the inequalities on augmentation filtrations of finite groups."""

from fractions import Fraction
from pathlib import Path

import pytest

from app.certificates import NegativeValueVerdict
from app.exceptions import InvalidGroupTableError, PreconditionError
from app.group_checks import check_consistency, filtered_exactness_check, group_negative_value_test, vinberg_check
from app.group_table import parse_group_table
from app.group_words import GroupPresentation, parse_group_presentation
from tests.builders import cyclic_table, dihedral_table, klein_table


def load_grp(data_dir: Path, name: str) -> GroupPresentation:
    return parse_group_presentation((data_dir / name).read_text())


class TestConsistency:
    """Tests for check_consistency."""

    def test_relator_not_identity(self, data_dir: Path) -> None:
        """Test x^3 against Z/4."""
        with pytest.raises(PreconditionError, match="Relator 1"):
            check_consistency(load_grp(data_dir, "cyclic3.grp"), cyclic_table(4))

    def test_generators_do_not_generate(self) -> None:
        """Test <x | x^2> mapped into the Klein four-group."""
        with pytest.raises(PreconditionError, match="generate"):
            check_consistency(parse_group_presentation("gen x\nrel x^2\n"), klein_table())

    def test_missing_generator_name(self, data_dir: Path) -> None:
        """Test that every presentation generator must be named in the table."""
        with pytest.raises(InvalidGroupTableError):
            check_consistency(load_grp(data_dir, "klein.grp"), cyclic_table(2))


class TestVinberg:
    """Tests for vinberg_check."""

    def test_klein(self, data_dir: Path) -> None:
        """Test the Klein four-group over GF(2) for n <= 6."""
        presentation = load_grp(data_dir, "klein.grp")
        group = parse_group_table((data_dir / "klein.gtab").read_text())
        report = vinberg_check(presentation, group, 2, 6)
        assert report.relator_degrees == [2, 2, 2]
        assert report.filtration == [1, 3, 4, 4, 4, 4, 4]
        assert report.holds
        assert [(row.lhs, row.rhs) for row in report.rows[:3]] == [(0, 0), (2, 2), (6, 6)]

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_cyclic_of_prime_order(self, p: int) -> None:
        """Test Z/p over GF(p) where deg(x^p - 1) = p and a_n = min(n + 1, p)."""
        presentation = parse_group_presentation(f"gen x\nrel x^{p}\n")
        report = vinberg_check(presentation, cyclic_table(p), p, 2 * p)
        assert report.relator_degrees == [p]
        assert report.filtration == [min(n + 1, p) for n in range(2 * p + 1)]
        assert report.holds
        assert report.series_form_holds

    def test_dihedral(self) -> None:
        """Test the dihedral group of order 8 over GF(2)."""
        presentation = parse_group_presentation("gen r\ngen t\nrel r^4\nrel t^2\nrel t*r*t^-1*r\n")
        report = vinberg_check(presentation, dihedral_table(4), 2, 7)
        assert report.holds

    def test_assigned_degrees_are_used(self, data_dir: Path) -> None:
        """Test that an assigned degree replaces the computed one."""
        presentation = parse_group_presentation("gen x\nrel 2 x^3\n")
        report = vinberg_check(presentation, parse_group_table((data_dir / "z3.gtab").read_text()), 3, 4)
        assert report.relator_degrees == [2]


class TestFilteredExactness:
    """Tests for filtered_exactness_check."""

    def test_klein(self, data_dir: Path) -> None:
        """Test 2 <= 2 at n = 0 and 6 <= 6 at n = 1."""
        report = filtered_exactness_check(load_grp(data_dir, "klein.grp"), klein_table(), 2, 4)
        assert report.applicable
        assert report.holds
        assert [(row.lhs, row.rhs) for row in report.rows[:2]] == [(2, 2), (6, 6)]

    def test_not_applicable(self, data_dir: Path) -> None:
        """Test Z/3 over GF(2), where b/b^2 vanishes."""
        report = filtered_exactness_check(load_grp(data_dir, "cyclic3.grp"), cyclic_table(3), 2, 4)
        assert not report.applicable
        assert report.rows == []


class TestGroupNegativeValue:
    """Tests for group_negative_value_test."""

    def test_obstruction(self) -> None:
        """Test 1 - 3t + t^2 at 1/2, which is -1/4."""
        presentation = parse_group_presentation("gen a\ngen b\ngen c\nrel a*b*a^-1*b^-1\n")
        report = group_negative_value_test(presentation, [2], [Fraction(1, 2)])
        assert report.verdict == NegativeValueVerdict.OBSTRUCTION
        assert report.value == Fraction(-1, 4)

    def test_klein_inconclusive(self, data_dir: Path) -> None:
        """Test 1 - 2t + 3t^2, which is positive."""
        report = group_negative_value_test(load_grp(data_dir, "klein.grp"), [2, 2, 2], [Fraction(1, 3), Fraction(2, 3)])
        assert report.verdict == NegativeValueVerdict.INCONCLUSIVE
