"""Exact linear algebra over GF(p) and the rationals.

Dense matrices are lists of rows. Over GF(p) elimination runs on numpy ``int64`` arrays
(entries stay below p < 2^31, so every product fits); over the rationals the rank is
computed by fraction-free (Bareiss) elimination on integer rows.
"""

from __future__ import annotations

import heapq
import logging
from collections.abc import Mapping, Sequence
from fractions import Fraction
from math import lcm

import numpy as np

from app.fields import Field, PrimeField, Scalar

logger = logging.getLogger(__name__)

Matrix = list[list[Scalar]]
SparseVector = dict[int, Scalar]


class RowSpace:
    """Incrementally maintained echelon basis of a subspace of K^ncols.

    Each row is normalized so that its pivot is its largest nonzero column, with
    coefficient 1, and a new row vanishes on every earlier pivot. With columns indexed in
    ascending deglex order the pivots are therefore the leading (greatest) monomials, and
    the non-pivot columns are the standard monomials.
    """

    def __init__(self, field: Field, ncols: int) -> None:
        self.field = field
        self.ncols = ncols
        self._rows: dict[int, SparseVector] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def free_columns(self) -> list[int]:
        return [c for c in range(self.ncols) if c not in self._rows]

    def rows(self) -> list[SparseVector]:
        """Reduced echelon rows in increasing pivot order: 1 at the pivot, 0 at every other pivot."""
        reduced = []
        for pivot in self.pivots:
            row = self.reduce({c: v for c, v in self._rows[pivot].items() if c != pivot})
            row[pivot] = self.field.one
            reduced.append(dict(sorted(row.items())))
        return reduced

    def reduce(self, vector: Mapping[int, Scalar]) -> SparseVector:
        """Subtract the projection onto the row space; the result lives on free columns.

        Pivots are eliminated from the largest down: a row only touches columns below its
        pivot, so no eliminated pivot can reappear.
        """
        field = self.field
        result = {c: v for c, v in vector.items() if not field.is_zero(v)}
        heap = [-c for c in result if c in self._rows]
        heapq.heapify(heap)
        while heap:
            pivot = -heapq.heappop(heap)
            factor = result.get(pivot)
            if factor is None:
                continue
            for column, value in self._rows[pivot].items():
                previous = result.get(column)
                updated = field.sub(field.zero if previous is None else previous, field.mul(factor, value))
                if field.is_zero(updated):
                    result.pop(column, None)
                    continue
                if previous is None and column in self._rows:
                    heapq.heappush(heap, -column)
                result[column] = updated
        return result

    def insert(self, vector: Mapping[int, Scalar]) -> bool:
        """Add a vector to the spanning set; return whether the rank grew."""
        field = self.field
        reduced = self.reduce(vector)
        if not reduced:
            return False
        pivot = max(reduced)
        scale = field.inv(reduced[pivot])
        self._rows[pivot] = {c: field.mul(scale, v) for c, v in reduced.items()}
        return True

    def contains(self, vector: Mapping[int, Scalar]) -> bool:
        return not self.reduce(vector)


def _rref_mod_p(array: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """RREF over GF(p) with leftmost pivots; returns the nonzero rows and pivot columns."""
    a = np.array(array, dtype=np.int64) % p
    nrows, ncols = a.shape
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        candidates = np.nonzero(a[row:, col])[0]
        if candidates.size == 0:
            continue
        pivot = row + int(candidates[0])
        if pivot != row:
            a[[row, pivot]] = a[[pivot, row]]
        a[row] = (a[row] * pow(int(a[row, col]), -1, p)) % p
        factors = a[:, col].copy()
        factors[row] = 0
        targets = np.nonzero(factors)[0]
        if targets.size:
            a[targets] = (a[targets] - np.outer(factors[targets], a[row])) % p
        pivots.append(col)
        row += 1
    return a[:row], pivots


def row_basis_mod_p(array: np.ndarray, p: int) -> np.ndarray:
    """Reduced basis of the row space of an integer array over GF(p)."""
    if array.size == 0:
        return np.zeros((0, array.shape[1] if array.ndim == 2 else 0), dtype=np.int64)
    basis, _ = _rref_mod_p(array, p)
    return basis


def _integer_rows(matrix: Sequence[Sequence[Scalar]]) -> list[list[int]]:
    rows = []
    for row in matrix:
        fractions = [Fraction(v) for v in row]
        scale = lcm(1, *(f.denominator for f in fractions))
        rows.append([int(f * scale) for f in fractions])
    return rows


def _bareiss_rank(rows: list[list[int]], ncols: int) -> int:
    m = [row[:] for row in rows]
    nrows = len(m)
    previous = 1
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        pivot = next((r for r in range(rank, nrows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        lead = m[rank][col]
        for r in range(rank + 1, nrows):
            below = m[r][col]
            for c in range(col + 1, ncols):
                m[r][c] = (m[r][c] * lead - below * m[rank][c]) // previous
            m[r][col] = 0
        previous = lead
        rank += 1
    return rank


def matrix_rank(field: Field, matrix: Sequence[Sequence[Scalar]], ncols: int | None = None) -> int:
    """Rank of a dense matrix over ``field``.

    Args:
        field: Coefficient field.
        matrix: Rows of the matrix.
        ncols: Column count, needed only when there are no rows.

    Returns:
        int: The rank.
    """
    if not matrix or not matrix[0]:
        return 0
    ncols = len(matrix[0]) if ncols is None else ncols
    if isinstance(field, PrimeField):
        _, pivots = _rref_mod_p(np.array([[int(v) for v in row] for row in matrix], dtype=np.int64), field.p)
        return len(pivots)
    return _bareiss_rank(_integer_rows(matrix), ncols)


def rref(field: Field, matrix: Sequence[Sequence[Scalar]], ncols: int) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form with leftmost pivots.

    Returns:
        tuple: Nonzero echelon rows and their pivot columns.
    """
    if not matrix:
        return [], []
    if isinstance(field, PrimeField):
        reduced, pivots = _rref_mod_p(np.array([[int(v) for v in row] for row in matrix], dtype=np.int64), field.p)
        return [[int(v) for v in row] for row in reduced], pivots
    rows = [[Fraction(v) for v in row] for row in matrix]
    pivots = []
    top = 0
    for col in range(ncols):
        pivot = next((r for r in range(top, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[top], rows[pivot] = rows[pivot], rows[top]
        lead = rows[top][col]
        rows[top] = [v / lead for v in rows[top]]
        for r, current in enumerate(rows):
            if r != top and current[col] != 0:
                factor = current[col]
                rows[r] = [a - factor * b for a, b in zip(current, rows[top], strict=True)]
        pivots.append(col)
        top += 1
    return [list(row) for row in rows[:top]], pivots


def nullspace(field: Field, matrix: Sequence[Sequence[Scalar]], ncols: int) -> Matrix:
    """Basis of the right kernel {v : matrix . v = 0}, one vector per free column."""
    reduced, pivots = rref(field, matrix, ncols)
    pivot_set = set(pivots)
    basis: Matrix = []
    for free in (c for c in range(ncols) if c not in pivot_set):
        vector = [field.zero] * ncols
        vector[free] = field.one
        for row, col in zip(reduced, pivots, strict=True):
            vector[col] = field.neg(row[free])
        basis.append(vector)
    return basis


def column_rank(field: Field, columns: Sequence[Mapping[int, Scalar]], nrows: int) -> int:
    """Rank of a matrix given by sparse columns."""
    space = RowSpace(field, nrows)
    for column in columns:
        space.insert(column)
    return space.rank


def sparse_to_dense(field: Field, columns: Sequence[Mapping[int, Scalar]], nrows: int) -> Matrix:
    """Dense row-major matrix from sparse columns."""
    matrix: Matrix = [[field.zero] * len(columns) for _ in range(nrows)]
    for c, column in enumerate(columns):
        for r, value in column.items():
            matrix[r][c] = value
    return matrix
