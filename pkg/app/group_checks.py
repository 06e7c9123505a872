"""Dimension inequalities for augmentation filtrations of finite group algebras."""

from __future__ import annotations

import logging
from fractions import Fraction

from pydantic import Field

from app.certificates import NegativeValueReport, negative_value_test
from app.constants import DEFAULT_MAGNUS_CAP
from app.exceptions import PreconditionError
from app.fields import PrimeField
from app.group_table import FiniteGroupTable, filtration_dims
from app.group_words import GroupPresentation, relator_degrees
from app.reports import Report
from app.truncated_series import TruncatedSeries, succeq

logger = logging.getLogger(__name__)


class InequalityRow(Report):
    n: int = Field(description="Index n")
    lhs: int = Field(description="Left-hand side")
    rhs: int = Field(description="Right-hand side")
    holds: bool = Field(description="Whether lhs <= rhs")


class VinbergReport(Report):
    prime: int = Field(description="Characteristic of the group algebra")
    relator_degrees: list[int] = Field(description="deg(r - 1) per relator, assigned or computed")
    filtration: list[int] = Field(description="a_0..a_N")
    rows: list[InequalityRow] = Field(description="|X| a_(n-1) <= sum_r a_(n-deg r) + a_n - 1 per n")
    series_form_holds: bool = Field(description="(1 - h(X) + h(R)) H(B) (1-t)^-1 >= (1-t)^-1 to order N")

    @property
    def holds(self) -> bool:
        return self.series_form_holds and all(row.holds for row in self.rows)


class FilteredExactnessReport(Report):
    applicable: bool = Field(description="Whether |X| = a_1 - a_0 = dim b/b^2")
    rows: list[InequalityRow] = Field(description="|X| a_n <= |R| a_(n-1) + a_(n+1) - 1 per n")

    @property
    def holds(self) -> bool:
        return all(row.holds for row in self.rows)


def generator_images(presentation: GroupPresentation, group: FiniteGroupTable) -> list[int]:
    """Table elements of the presentation's generators, matched by name."""
    return [group.generator_index(name) for name in presentation.generators]


def check_consistency(presentation: GroupPresentation, group: FiniteGroupTable) -> None:
    """Require every relator to evaluate to 1 and the generators to generate the table.

    Raises:
        PreconditionError: If the table is not a quotient of the presented group onto G.
    """
    images = generator_images(presentation, group)
    for index, relator in enumerate(presentation.relators):
        if group.evaluate(relator, images) != group.identity:
            raise PreconditionError(f"Relator {index + 1} ({relator.render(presentation.generators)}) is not the identity in the table")
    if len(group.generated_subgroup(images)) != group.order:
        raise PreconditionError("The generators do not generate the group table")


def _extended(values: list[int], n: int) -> int:
    return 0 if n < 0 else values[n]


def vinberg_check(presentation: GroupPresentation, group: FiniteGroupTable, p: int, max_n: int, cap: int = DEFAULT_MAGNUS_CAP) -> VinbergReport:
    """Check |X| a_(n-1) <= sum_r a_(n - deg(r-1)) + a_n - delta_n for 0 <= n <= max_n.

    Raises:
        PreconditionError: If the presentation does not describe the table.
        DegreeUnavailableError: If a relator degree is above ``cap`` and was not assigned.
    """
    field = PrimeField(p)
    check_consistency(presentation, group)
    degrees = relator_degrees(presentation, field, cap)
    a = filtration_dims(group, p, max_n)
    generator_count = len(presentation.generators)

    rows = []
    for n in range(max_n + 1):
        lhs = generator_count * _extended(a, n - 1)
        rhs = sum(_extended(a, n - d) for d in degrees) + a[n] - 1
        rows.append(InequalityRow(n=n, lhs=lhs, rhs=rhs, holds=lhs <= rhs))

    one = TruncatedSeries.one(max_n)
    h_x = TruncatedSeries.polynomial({1: generator_count}, max_n)
    h_r = TruncatedSeries.polynomial(_counts(degrees), max_n)
    # H(B)/(1 - t) has coefficients a_n because b_n = a_n - a_(n-1)
    cumulative = TruncatedSeries.of(a, max_n)
    geometric = TruncatedSeries.geometric(1, max_n)
    series_form = succeq((one - h_x + h_r) * cumulative, geometric)

    report = VinbergReport(prime=p, relator_degrees=degrees, filtration=a, rows=rows, series_form_holds=series_form)
    if not report.holds:
        logger.error("Vinberg inequality fails over GF(%d): %s", p, [row.n for row in rows if not row.holds])
    return report


def filtered_exactness_check(presentation: GroupPresentation, group: FiniteGroupTable, p: int, max_n: int) -> FilteredExactnessReport:
    """Check |X| a_n <= |R| a_(n-1) + a_(n+1) - 1, valid when |X| = dim b/b^2."""
    check_consistency(presentation, group)
    a = filtration_dims(group, p, max_n + 1)
    generator_count, relator_count = len(presentation.generators), len(presentation.relators)
    if generator_count != a[1] - a[0]:
        logger.info("Filtered exactness check skipped: |X| = %d but dim b/b^2 = %d", generator_count, a[1] - a[0])
        return FilteredExactnessReport(applicable=False, rows=[])
    rows = []
    for n in range(max_n + 1):
        lhs = generator_count * a[n]
        rhs = relator_count * _extended(a, n - 1) + a[n + 1] - 1
        rows.append(InequalityRow(n=n, lhs=lhs, rhs=rhs, holds=lhs <= rhs))
    return FilteredExactnessReport(applicable=True, rows=rows)


def _counts(degrees: list[int]) -> dict[int, int]:
    counts: dict[int, int] = {}
    for degree in degrees:
        counts[degree] = counts.get(degree, 0) + 1
    return counts


def group_negative_value_test(presentation: GroupPresentation, degrees: list[int], grid: list[Fraction]) -> NegativeValueReport:
    """Negative-value test with h(X) = |X| t and h(R) = sum_r t^deg(r-1)."""
    order = max([1, *degrees])
    h_x = TruncatedSeries.polynomial({1: len(presentation.generators)}, order)
    h_r = TruncatedSeries.polynomial(_counts(degrees), order)
    return negative_value_test(h_x, h_r, grid)
