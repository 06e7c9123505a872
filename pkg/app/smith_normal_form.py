"""Smith normal form of integer matrices and the abelianization of a presented group."""

from __future__ import annotations

import logging
from enum import StrEnum
from fractions import Fraction

import numpy as np
from pydantic import Field

from app.exceptions import InternalInconsistencyError
from app.fields import QQ, PrimeField
from app.group_words import GroupPresentation
from app.linalg import matrix_rank
from app.reports import ExactRational, Report
from app.serre import check_preconditions

logger = logging.getLogger(__name__)


class SmithNormalForm:
    """Unimodular reduction D = left * A * right with D diagonal and d_1 | d_2 | ...

    Entries are Python integers held in object arrays, so no overflow can occur. The
    pivot of each stage is a nonzero entry of minimal absolute value.

    Args:
        matrix: Integer matrix as a list of rows.
        ncols: Column count, needed only when there are no rows.
    """

    def __init__(self, matrix: list[list[int]], ncols: int | None = None) -> None:
        ncols = len(matrix[0]) if matrix else (ncols or 0)
        self.original = np.array(matrix, dtype=object).reshape(len(matrix), ncols)
        self.diagonal = self.original.copy()
        self.left = np.eye(len(matrix), dtype=int).astype(object)
        self.right = np.eye(ncols, dtype=int).astype(object)
        self._reduce()

    @property
    def shape(self) -> tuple[int, int]:
        nrows, ncols = self.original.shape
        return nrows, ncols

    def _pivot(self, s: int) -> tuple[int, int] | None:
        best: tuple[int, int] | None = None
        for i in range(s, self.shape[0]):
            for j in range(s, self.shape[1]):
                value = self.diagonal[i, j]
                if value != 0 and (best is None or abs(value) < abs(self.diagonal[best])):
                    best = (i, j)
        return best

    def _swap_rows(self, a: int, b: int) -> None:
        self.diagonal[[a, b]] = self.diagonal[[b, a]]
        self.left[[a, b]] = self.left[[b, a]]

    def _swap_columns(self, a: int, b: int) -> None:
        self.diagonal[:, [a, b]] = self.diagonal[:, [b, a]]
        self.right[:, [a, b]] = self.right[:, [b, a]]

    def _add_row(self, target: int, source: int, k: int) -> None:
        self.diagonal[target] += self.diagonal[source] * k
        self.left[target] += self.left[source] * k

    def _add_column(self, target: int, source: int, k: int) -> None:
        self.diagonal[:, target] += self.diagonal[:, source] * k
        self.right[:, target] += self.right[:, source] * k

    def _reduce(self) -> None:
        nrows, ncols = self.shape
        s = 0
        while s < min(nrows, ncols):
            pivot = self._pivot(s)
            if pivot is None:
                break
            self._swap_rows(s, pivot[0])
            self._swap_columns(s, pivot[1])
            lead = self.diagonal[s, s]
            for i in range(s + 1, nrows):
                if self.diagonal[i, s] != 0:
                    self._add_row(i, s, -(self.diagonal[i, s] // lead))
            for j in range(s + 1, ncols):
                if self.diagonal[s, j] != 0:
                    self._add_column(j, s, -(self.diagonal[s, j] // lead))
            if any(self.diagonal[i, s] != 0 for i in range(s + 1, nrows)) or any(self.diagonal[s, j] != 0 for j in range(s + 1, ncols)):
                continue
            stray = next(((i, j) for i in range(s + 1, nrows) for j in range(s + 1, ncols) if self.diagonal[i, j] % lead != 0), None)
            if stray is not None:
                # pull a row that is not divisible by the pivot into row s and repeat
                self._add_row(s, stray[0], 1)
                continue
            if lead < 0:
                self.diagonal[s] *= -1
                self.left[s] *= -1
            s += 1

    @property
    def invariant_factors(self) -> list[int]:
        """The nonzero diagonal entries, positive and in divisibility order."""
        return [int(self.diagonal[i, i]) for i in range(min(self.shape)) if self.diagonal[i, i] != 0]

    def verify(self) -> bool:
        """D == left * A * right with both transforms unimodular."""
        product = self.left.dot(self.original).dot(self.right) if self.original.size else self.diagonal
        unimodular = all(abs(_integer_determinant(m)) == 1 for m in (self.left, self.right) if m.size)
        return bool(np.array_equal(product, self.diagonal)) and unimodular


def _integer_determinant(matrix: np.ndarray) -> int:
    """Determinant by exact fraction elimination."""
    rows = [[Fraction(int(v)) for v in row] for row in matrix]
    size = len(rows)
    determinant = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            determinant = -determinant
        determinant *= rows[col][col]
        for r in range(col + 1, size):
            factor = rows[r][col] / rows[col][col]
            rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col], strict=True)]
    return int(determinant)


def smith_normal_form(matrix: list[list[int]], ncols: int | None = None) -> SmithNormalForm:
    return SmithNormalForm(matrix, ncols)


class AbelianizationReport(Report):
    exponent_matrix: list[list[int]] = Field(description="Exponent sums, one row per relator")
    invariant_factors: list[int] = Field(description="Nonzero invariant factors of the exponent matrix")
    d_ab: int = Field(description="Minimal number of generators of the abelianization")
    is_finite: bool = Field(description="Whether the abelianization is finite")
    torsion: list[int] = Field(description="Invariant factors greater than 1")
    free_rank: int = Field(description="Rank of the free part of the abelianization")


def abelianization_rank(presentation: GroupPresentation) -> AbelianizationReport:
    """Invariant factors of G^ab from the exponent-sum matrix.

    Raises:
        InternalInconsistencyError: If the rank over Q disagrees with the nonzero factor count.
    """
    generator_count = len(presentation.generators)
    matrix = presentation.exponent_matrix()
    factors = smith_normal_form(matrix, generator_count).invariant_factors
    rank = matrix_rank(QQ, matrix, generator_count)
    if rank != len(factors):
        raise InternalInconsistencyError(f"Exponent matrix has rank {rank} over Q but {len(factors)} nonzero invariant factors")
    units = sum(1 for f in factors if f == 1)
    return AbelianizationReport(
        exponent_matrix=matrix,
        invariant_factors=factors,
        d_ab=generator_count - units,
        is_finite=len(factors) == generator_count,
        torsion=[f for f in factors if f > 1],
        free_rank=generator_count - len(factors),
    )


def mod_p_rank(presentation: GroupPresentation, p: int) -> int:
    """dim over GF(p) of GF(p) (x) G^ab, which is dim b/b^2 for the group algebra over GF(p).

    Counted from the invariant factors prime to p and cross-checked against the rank of the
    exponent matrix reduced mod p.
    """
    field = PrimeField(p)
    generator_count = len(presentation.generators)
    matrix = presentation.exponent_matrix()
    factors = smith_normal_form(matrix, generator_count).invariant_factors
    dimension = generator_count - sum(1 for f in factors if f % field.p != 0)
    reduced_rank = matrix_rank(field, matrix, generator_count)
    if generator_count - reduced_rank != dimension:
        raise InternalInconsistencyError(f"Smith form gives dim {dimension} over GF({field.p}) but the reduced exponent matrix has rank {reduced_rank}")
    return dimension


class PGroupVerdict(StrEnum):
    CONSISTENT_WITH_FINITE = "ConsistentWithFinite"
    TRIVIAL_OR_INFINITE = "TrivialOrInfinite"
    NOT_APPLICABLE = "NotApplicable"


class PGroupReport(Report):
    generator_count: int = Field(description="|X|")
    relator_count: int = Field(description="|R|")
    d_ab: int = Field(description="Minimal number of generators of the abelianization")
    threshold: ExactRational = Field(description="|X|^2 / 4")
    exceeds_threshold: bool = Field(description="Whether |R| > |X|^2 / 4")
    verdict: PGroupVerdict = Field(description="Conclusion for finite p-groups")
    serre_hypotheses_hold: bool = Field(description="Whether d1 = |X| and d2 = |R| satisfy the recurrence hypotheses")


def gs_pgroup_report(presentation: GroupPresentation) -> PGroupReport:
    """Relation-count bound for finite p-groups when |X| is the minimal generator count of G^ab.

    A finite nontrivial p-group needs |R| > |X|^2 / 4; when that fails the group presented
    is trivial or infinite. No group order is ever computed.
    """
    abelianization = abelianization_rank(presentation)
    generator_count, relator_count = len(presentation.generators), len(presentation.relators)
    threshold = Fraction(generator_count * generator_count, 4)
    exceeds = relator_count > threshold
    if generator_count != abelianization.d_ab:
        verdict = PGroupVerdict.NOT_APPLICABLE
    elif exceeds:
        verdict = PGroupVerdict.CONSISTENT_WITH_FINITE
    else:
        verdict = PGroupVerdict.TRIVIAL_OR_INFINITE
    return PGroupReport(
        generator_count=generator_count,
        relator_count=relator_count,
        d_ab=abelianization.d_ab,
        threshold=threshold,
        exceeds_threshold=exceeds,
        verdict=verdict,
        serre_hypotheses_hold=check_preconditions(Fraction(generator_count), Fraction(relator_count)).holds,
    )
