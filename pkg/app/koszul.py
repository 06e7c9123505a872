"""Degree slices of the resolution B^(R) -> B^(X) -> B -> K -> 0 and their checks.

In degree n the middle term is the sum over generators x of B_{n-deg x}, the left term the
sum over relations r of B_{n-deg r}. M2 sends b (x) r to sum_x b*(dr/dx) (x) x and M1 sends
b (x) x to b*x. Blocks follow declaration order; inside a block, standard monomials follow
deglex order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from pydantic import Field

from app.exceptions import InternalInconsistencyError, ParameterRangeError
from app.fields import Scalar
from app.free_algebra import FreePoly, Word, poly_mul
from app.graded_dims import get_graded_algebra
from app.linalg import Matrix, SparseVector, column_rank, nullspace, sparse_to_dense
from app.presentation import Presentation
from app.reports import Report

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KoszulDegreeData:
    """Both boundary matrices of degree ``n`` as sparse columns, with their ranks.

    M2 columns are indexed by (relation, standard monomial of B_{n-deg r}), its rows by
    (generator, standard monomial of B_{n-deg x}); M1 maps those rows into B_n.
    """

    degree: int
    target: tuple[Word, ...]
    generator_blocks: tuple[tuple[int, tuple[Word, ...]], ...]
    relation_blocks: tuple[tuple[int, tuple[Word, ...]], ...]
    m1_columns: tuple[SparseVector, ...]
    m2_columns: tuple[SparseVector, ...]
    rank_m1: int
    rank_m2: int

    @property
    def dimension(self) -> int:
        return len(self.target)

    @property
    def middle_dimension(self) -> int:
        return sum(len(block) for _, block in self.generator_blocks)

    @property
    def source_dimension(self) -> int:
        return sum(len(block) for _, block in self.relation_blocks)

    @property
    def nullity_m1(self) -> int:
        return self.middle_dimension - self.rank_m1

    @property
    def nullity_m2(self) -> int:
        return self.source_dimension - self.rank_m2

    def m1(self, presentation: Presentation) -> Matrix:
        return sparse_to_dense(presentation.field, self.m1_columns, self.dimension)

    def m2(self, presentation: Presentation) -> Matrix:
        return sparse_to_dense(presentation.field, self.m2_columns, self.middle_dimension)


def koszul_matrices(presentation: Presentation, n: int) -> KoszulDegreeData:
    """Build M1 and M2 in degree ``n`` from normal forms in the graded algebra."""
    if n < 0:
        raise ParameterRangeError(f"Degree must be nonnegative, got {n}")
    algebra = get_graded_algebra(presentation)
    field = presentation.field

    generator_blocks = tuple((x, algebra.standard(n - g.degree)) for x, g in enumerate(presentation.generators))
    relation_blocks = tuple((i, algebra.standard(n - r.degree)) for i, r in enumerate(presentation.relations))
    offsets: dict[int, int] = {}
    running = 0
    for x, block in generator_blocks:
        offsets[x] = running
        running += len(block)

    m1_columns: list[SparseVector] = []
    for x, block in generator_blocks:
        letter = presentation.generator_word(x)
        m1_columns.extend(algebra.normal_form(s * letter) for s in block)

    partials = [[presentation.partial(r.poly, x) for x in range(len(presentation.generators))] for r in presentation.relations]
    m2_columns: list[SparseVector] = []
    for i, block in relation_blocks:
        for s in block:
            column: SparseVector = {}
            lift = FreePoly.monomial(field, s)
            for x, generator in enumerate(presentation.generators):
                if partials[i][x].is_zero():
                    continue
                coordinates = algebra.coordinates(poly_mul(lift, partials[i][x]), n - generator.degree)
                column.update({offsets[x] + index: value for index, value in coordinates.items()})
            m2_columns.append(column)

    data = KoszulDegreeData(
        degree=n,
        target=algebra.standard(n),
        generator_blocks=generator_blocks,
        relation_blocks=relation_blocks,
        m1_columns=tuple(m1_columns),
        m2_columns=tuple(m2_columns),
        rank_m1=column_rank(field, m1_columns, len(algebra.standard(n))),
        rank_m2=column_rank(field, m2_columns, running),
    )
    logger.debug("Degree %d: M2 is %dx%d of rank %d, M1 is %dx%d of rank %d", n, running, data.source_dimension, data.rank_m2, data.dimension, running, data.rank_m1)
    return data


def composite_is_zero(presentation: Presentation, data: KoszulDegreeData) -> bool:
    """M1 * M2 == 0, evaluated column by column on the sparse data."""
    field = presentation.field
    for column in data.m2_columns:
        image: dict[int, Scalar] = {}
        for row, coefficient in column.items():
            for target, value in data.m1_columns[row].items():
                image[target] = field.add(image.get(target, field.zero), field.mul(coefficient, value))
        if any(not field.is_zero(v) for v in image.values()):
            return False
    return True


class GsInequalityRow(Report):
    """One degree of sum_x b_{n-deg x} <= sum_r b_{n-deg r} + b_n."""

    degree: int = Field(description="Degree n")
    lhs: int = Field(description="sum over generators of b_{n-deg x}")
    rhs: int = Field(description="sum over relations of b_{n-deg r}, plus b_n")
    slack: int = Field(description="rhs - lhs")
    holds: bool = Field(description="Whether lhs <= rhs")


class ExactnessReport(Report):
    degree: int = Field(description="Degree n")
    rank_m1: int = Field(description="Rank of M1")
    nullity_m1: int = Field(description="Nullity of M1")
    rank_m2: int = Field(description="Rank of M2")
    dimension: int = Field(description="b_n")
    composite_zero: bool = Field(description="Whether M1*M2 = 0")
    middle_exact: bool = Field(description="Whether rank(M2) = nullity(M1)")
    cokernel_exact: bool = Field(description="Whether rank(M1) = b_n - [n = 0]")
    holds: bool = Field(description="All three conditions")


class EulerReport(Report):
    degree: int = Field(description="Degree n")
    value: int = Field(description="b_n - sum_x b_{n-deg x} + sum_r b_{n-deg r} - nullity(M2)")
    expected: int = Field(description="1 for n = 0, else 0")
    holds: bool = Field(description="Whether value equals expected")


class KoszulReport(Report):
    """Everything the koszul command prints for one degree."""

    degree: int = Field(description="Degree n")
    dimension: int = Field(description="b_n")
    middle_dimension: int = Field(description="Dimension of the generator term")
    source_dimension: int = Field(description="Dimension of the relation term")
    rank_m1: int = Field(description="Rank of M1")
    nullity_m1: int = Field(description="Nullity of M1")
    rank_m2: int = Field(description="Rank of M2")
    nullity_m2: int = Field(description="Dimension of the kernel of the boundary map")
    composite_zero: bool = Field(description="Whether M1*M2 = 0")
    euler_value: int = Field(description="Alternating sum that must equal [n = 0]")
    gs_slack: int = Field(description="rhs - lhs of the degree-n inequality")
    exactness_holds: bool = Field(description="Exactness checks passed")
    euler_holds: bool = Field(description="Euler identity passed")
    slack_matches_kernel: bool = Field(description="Whether gs_slack = nullity(M2) + [n = 0]")
    kernel_basis: list[list[str]] | None = Field(description="Kernel basis vectors over the relation term", default=None)

    @property
    def holds(self) -> bool:
        return self.exactness_holds and self.euler_holds and self.slack_matches_kernel


def _gs_sides(presentation: Presentation, n: int) -> tuple[int, int]:
    algebra = get_graded_algebra(presentation)
    lhs = sum(algebra.dimension(n - g.degree) for g in presentation.generators)
    rhs = sum(algebra.dimension(n - r.degree) for r in presentation.relations) + algebra.dimension(n)
    return lhs, rhs


def check_gs_inequality(presentation: Presentation, n: int) -> GsInequalityRow:
    """Compare both sides of the degree-``n`` inequality from computed dimensions."""
    if n < 0:
        raise ParameterRangeError(f"Degree must be nonnegative, got {n}")
    lhs, rhs = _gs_sides(presentation, n)
    return GsInequalityRow(degree=n, lhs=lhs, rhs=rhs, slack=rhs - lhs, holds=lhs <= rhs)


def check_exactness(presentation: Presentation, n: int, data: KoszulDegreeData | None = None, raise_on_failure: bool = False) -> ExactnessReport:
    """Check M1*M2 = 0, rank(M2) = nullity(M1) and rank(M1) = b_n - [n = 0].

    Raises:
        InternalInconsistencyError: If ``raise_on_failure`` is set and a check fails.
    """
    data = data or koszul_matrices(presentation, n)
    composite = composite_is_zero(presentation, data)
    middle = data.rank_m2 == data.nullity_m1
    cokernel = data.rank_m1 == data.dimension - (1 if n == 0 else 0)
    report = ExactnessReport(
        degree=n,
        rank_m1=data.rank_m1,
        nullity_m1=data.nullity_m1,
        rank_m2=data.rank_m2,
        dimension=data.dimension,
        composite_zero=composite,
        middle_exact=middle,
        cokernel_exact=cokernel,
        holds=composite and middle and cokernel,
    )
    if not report.holds:
        logger.error("Exactness fails in degree %d: %s", n, report.model_dump())
        if raise_on_failure:
            raise InternalInconsistencyError(f"Resolution is not exact in degree {n}")
    return report


def euler_identity(presentation: Presentation, n: int, data: KoszulDegreeData | None = None, raise_on_failure: bool = False) -> EulerReport:
    """b_n - sum_x b_{n-deg x} + sum_r b_{n-deg r} - nullity(M2) must equal [n = 0]."""
    data = data or koszul_matrices(presentation, n)
    lhs, rhs = _gs_sides(presentation, n)
    value = rhs - lhs - data.nullity_m2
    expected = 1 if n == 0 else 0
    report = EulerReport(degree=n, value=value, expected=expected, holds=value == expected)
    if not report.holds:
        logger.error("Euler identity fails in degree %d: value %d, expected %d", n, value, expected)
        if raise_on_failure:
            raise InternalInconsistencyError(f"Euler identity fails in degree {n}: {value} != {expected}")
    return report


def kernel_basis(presentation: Presentation, data: KoszulDegreeData) -> Matrix:
    """Basis of Ker(M2) in the coordinates of the relation term."""
    return nullspace(presentation.field, data.m2(presentation), data.source_dimension)


def koszul_report(presentation: Presentation, n: int, with_kernel_basis: bool = False) -> KoszulReport:
    data = koszul_matrices(presentation, n)
    gs = check_gs_inequality(presentation, n)
    exactness = check_exactness(presentation, n, data)
    euler = euler_identity(presentation, n, data)
    basis = None
    if with_kernel_basis:
        basis = [[presentation.field.format(v) for v in vector] for vector in kernel_basis(presentation, data)]
    return KoszulReport(
        degree=n,
        dimension=data.dimension,
        middle_dimension=data.middle_dimension,
        source_dimension=data.source_dimension,
        rank_m1=data.rank_m1,
        nullity_m1=data.nullity_m1,
        rank_m2=data.rank_m2,
        nullity_m2=data.nullity_m2,
        composite_zero=exactness.composite_zero,
        euler_value=euler.value,
        gs_slack=gs.slack,
        exactness_holds=exactness.holds,
        euler_holds=euler.holds,
        slack_matches_kernel=gs.slack == data.nullity_m2 + (1 if n == 0 else 0),
        kernel_basis=basis,
    )
