"""Graded component dimensions b_n = dim B_n of B = K<X | R>.

Degree n is handled by linear algebra on the admissible monomials x*s, where s runs over
the standard monomials of degree n - deg(x). Every word w = x*w' is congruent modulo the
ideal to x*NF(w'), so these monomials span B_n, and the relation rows r*s (r in R, s
standard) projected the same way span the ideal's intersection with their span. The
standard monomials of degree n are the non-pivot columns of that row space when pivots
are taken at the deglex-greatest monomial; they coincide with the non-pivot columns of the
full relation span over all words of degree n.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field
from functools import lru_cache

from app.exceptions import ParameterRangeError
from app.fields import Field, Scalar
from app.free_algebra import FreePoly, Word, monomial_count
from app.linalg import RowSpace, SparseVector
from app.presentation import Presentation
from app.truncated_series import TruncatedSeries

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DegreeBasis:
    """Relation span and standard monomials of one degree.

    ``row_space`` is the echelon form of the relation span restricted to the
    admissible monomials; its columns index ``admissible``.
    """

    degree: int
    admissible: tuple[Word, ...]
    row_space: RowSpace = field(repr=False)
    standard: tuple[Word, ...]
    monomial_count: int
    column_of: dict[Word, int] = field(repr=False, compare=False)
    standard_position: dict[int, int] = field(repr=False, compare=False)

    @property
    def dimension(self) -> int:
        return len(self.standard)

    @property
    def relation_rank(self) -> int:
        """Rank of the full relation span in F_n."""
        return self.monomial_count - self.dimension

    @property
    def restricted_rank(self) -> int:
        return self.row_space.rank

    def pivot_monomials(self) -> list[Word]:
        return [self.admissible[c] for c in self.row_space.pivots]

    def echelon_rows(self) -> list[dict[Word, Scalar]]:
        """Echelon rows keyed by monomial, in increasing pivot order."""
        return [{self.admissible[c]: v for c, v in row.items()} for row in self.row_space.rows()]


@dataclass(frozen=True)
class DimensionTable:
    """b_0..b_N of a presentation."""

    max_degree: int
    dims: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        if n < 0:
            return 0
        if n > self.max_degree:
            raise ParameterRangeError(f"Degree {n} exceeds the computed maximum {self.max_degree}")
        return self.dims[n]


class GradedAlgebra:
    """Lazily computed, cached degree bases and normal forms of one presentation.

    Degrees are built bottom up under a reentrant lock, so concurrent callers asking for
    different degrees see one consistent cache.
    """

    def __init__(self, presentation: Presentation) -> None:
        self.presentation = presentation
        self.field: Field = presentation.field
        self._lock = threading.RLock()
        self._bases: dict[int, DegreeBasis] = {}
        self._normal_forms: dict[Word, SparseVector] = {}

    def basis(self, n: int) -> DegreeBasis:
        """DegreeBasis of degree ``n``, computing all lower degrees first."""
        if n < 0:
            raise ParameterRangeError(f"Degree must be nonnegative, got {n}")
        with self._lock:
            cached = self._bases.get(n)
            if cached is not None:
                return cached
            for m in range(n + 1):
                if m not in self._bases:
                    self._bases[m] = self._build(m)
            return self._bases[n]

    def dimension(self, n: int) -> int:
        return 0 if n < 0 else self.basis(n).dimension

    def standard(self, n: int) -> tuple[Word, ...]:
        return () if n < 0 else self.basis(n).standard

    def evict(self) -> None:
        """Drop every cached degree and normal form."""
        with self._lock:
            self._bases.clear()
            self._normal_forms.clear()

    def normal_form(self, word: Word) -> SparseVector:
        """Coordinates of ``word + ideal`` in the standard monomials of its degree."""
        if word.degree == 0:
            return {0: self.field.one}
        with self._lock:
            cached = self._normal_forms.get(word)
            if cached is not None:
                return cached
            basis = self.basis(word.degree)
            reduced = basis.row_space.reduce(self._project({word: self.field.one}, basis.column_of))
            result = {basis.standard_position[c]: v for c, v in reduced.items()}
            self._normal_forms[word] = result
            return result

    def coordinates(self, poly: FreePoly, n: int) -> SparseVector:
        """Coordinates in B_n of the degree-``n`` part of ``poly``."""
        field = self.field
        total: SparseVector = {}
        for word, coefficient in poly.terms:
            if word.degree != n:
                continue
            for index, value in self.normal_form(word).items():
                updated = field.add(total.get(index, field.zero), field.mul(coefficient, value))
                if field.is_zero(updated):
                    total.pop(index, None)
                else:
                    total[index] = updated
        return total

    def _project(self, terms: dict[Word, Scalar], column_of: dict[Word, int]) -> SparseVector:
        """Map homogeneous terms x*w' to x*NF(w') in admissible coordinates."""
        field = self.field
        degrees = self.presentation.degrees
        vector: SparseVector = {}
        for word, coefficient in terms.items():
            x = word.letters[0]
            head = Word(degrees[x], (x,))
            tail = Word(word.degree - degrees[x], word.letters[1:])
            lower = self.standard(tail.degree)
            for index, value in self.normal_form(tail).items():
                column = column_of[head * lower[index]]
                updated = field.add(vector.get(column, field.zero), field.mul(coefficient, value))
                if field.is_zero(updated):
                    vector.pop(column, None)
                else:
                    vector[column] = updated
        return vector

    def _build(self, n: int) -> DegreeBasis:
        degrees = self.presentation.degrees
        count = monomial_count(degrees, n)
        if n == 0:
            empty = Word.empty()
            return DegreeBasis(0, (empty,), RowSpace(self.field, 1), (empty,), count, {empty: 0}, {0: 0})

        admissible = tuple(sorted(Word(degrees[x], (x,)) * s for x in range(len(degrees)) if degrees[x] <= n for s in self._bases[n - degrees[x]].standard))
        column_of = {word: c for c, word in enumerate(admissible)}
        row_space = RowSpace(self.field, len(admissible))
        for relation in self.presentation.relations:
            if relation.degree > n or relation.poly.is_zero():
                continue
            for s in self._bases[n - relation.degree].standard:
                product: dict[Word, Scalar] = {word * s: coefficient for word, coefficient in relation.poly.terms}
                row_space.insert(self._project(product, column_of))
        free = row_space.free_columns()
        standard = tuple(admissible[c] for c in free)
        logger.debug("Degree %d: %d monomials, %d admissible, restricted rank %d, b_n = %d", n, count, len(admissible), row_space.rank, len(standard))
        return DegreeBasis(n, admissible, row_space, standard, count, column_of, {c: i for i, c in enumerate(free)})


_algebra_lock = threading.Lock()


@lru_cache(maxsize=32)
def _cached_algebra(presentation: Presentation) -> GradedAlgebra:
    return GradedAlgebra(presentation)


def get_graded_algebra(presentation: Presentation) -> GradedAlgebra:
    """Shared GradedAlgebra per presentation; concurrent callers receive the same instance."""
    with _algebra_lock:
        return _cached_algebra(presentation)


def relation_span_degree(presentation: Presentation, n: int) -> DegreeBasis:
    """Echelon form of the relation span in degree ``n``, with its standard monomials.

    Rows are the products r*s (s standard in degree n - deg r) written in the admissible
    monomials x*t (x a generator, t standard in degree n - deg x), not in all words of
    degree n. The rank over all words is ``relation_rank = monomial_count - dimension``;
    ``restricted_rank`` is the rank of the admissible rows.
    """
    return get_graded_algebra(presentation).basis(n)


def graded_dimension(presentation: Presentation, n: int) -> int:
    """b_n = dim B_n; zero for negative n and one for n = 0."""
    return get_graded_algebra(presentation).dimension(n)


def dimension_table(presentation: Presentation, max_degree: int) -> DimensionTable:
    if max_degree < 0:
        raise ParameterRangeError(f"Maximum degree must be nonnegative, got {max_degree}")
    algebra = get_graded_algebra(presentation)
    return DimensionTable(max_degree, tuple(algebra.dimension(n) for n in range(max_degree + 1)))


def hilbert_truncated(presentation: Presentation, order: int) -> TruncatedSeries:
    """H(B) = sum b_n t^n up to t^order."""
    return TruncatedSeries.of(dimension_table(presentation, order).dims, order)


def generator_series(presentation: Presentation, order: int) -> TruncatedSeries:
    """h(X) = sum x_n t^n."""
    return TruncatedSeries.polynomial(presentation.generator_counts(), order)


def relation_series(presentation: Presentation, order: int) -> TruncatedSeries:
    """h(R) = sum r_n t^n, repeated and zero relations counted."""
    return TruncatedSeries.polynomial(presentation.relation_counts(), order)
