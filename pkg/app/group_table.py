"""Finite groups given by a multiplication table, and augmentation filtrations of KG.

.gtab grammar (``#`` starts a comment)::

    order <m>
    <m lines of m element indices: row g, column h holds g*h>
    id <index>
    gen <name> <index>
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from app.constants import EXHAUSTIVE_ASSOCIATIVITY_LIMIT
from app.exceptions import InvalidGroupTableError, ParameterRangeError, PresentationSyntaxError
from app.fields import PrimeField
from app.group_words import GroupWord
from app.linalg import row_basis_mod_p
from app.sanitization import normalize_line_endings, sanitize_for_logging

logger = logging.getLogger(__name__)

ASSOCIATIVITY_SAMPLES = 20000


@dataclass(frozen=True, eq=False)
class FiniteGroupTable:
    """A finite group: ``table[g, h]`` is the index of g*h.

    Construction verifies closure, the identity, inverses (the table is a Latin square)
    and associativity; exhaustively up to order 64, by a fixed random sample above.
    """

    table: np.ndarray = field(repr=False)
    identity: int
    generators: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        table = self.table
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise InvalidGroupTableError(f"Multiplication table must be a nonempty square, got shape {table.shape}")
        m = self.order
        if table.min() < 0 or table.max() >= m:
            raise InvalidGroupTableError(f"Table entries must lie in [0, {m})")
        if not 0 <= self.identity < m:
            raise InvalidGroupTableError(f"Identity index {self.identity} is out of range")
        elements = np.arange(m)
        if not (np.array_equal(table[self.identity], elements) and np.array_equal(table[:, self.identity], elements)):
            raise InvalidGroupTableError(f"Element {self.identity} is not a two-sided identity")
        for g in range(m):
            if len(np.unique(table[g])) != m or len(np.unique(table[:, g])) != m:
                raise InvalidGroupTableError(f"Row or column {g} is not a permutation, so inverses fail")
        if not self._is_associative():
            raise InvalidGroupTableError("Multiplication is not associative")
        for name, index in self.generators:
            if not 0 <= index < m:
                raise InvalidGroupTableError(f"Generator {sanitize_for_logging(name)} has index {index} out of range")

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    def _is_associative(self) -> bool:
        table = self.table
        m = self.order
        if m <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT:
            left = table[table]
            right = table[np.arange(m)[:, None, None], table[None, :, :]]
            return bool(np.array_equal(left, right))
        rng = np.random.default_rng(0)
        a, b, c = rng.integers(0, m, size=(3, ASSOCIATIVITY_SAMPLES))
        return bool(np.array_equal(table[table[a, b], c], table[a, table[b, c]]))

    def multiply(self, g: int, h: int) -> int:
        return int(self.table[g, h])

    def inverse(self, g: int) -> int:
        return int(np.flatnonzero(self.table[g] == self.identity)[0])

    def generator_index(self, name: str) -> int:
        for generator, index in self.generators:
            if generator == name:
                return index
        raise InvalidGroupTableError(f"Table has no generator named {sanitize_for_logging(name)!r}")

    def evaluate(self, word: GroupWord, images: list[int]) -> int:
        """Element represented by ``word`` when generator i maps to ``images[i]``."""
        element = self.identity
        for generator, exponent in word.letters:
            image = images[generator] if exponent == 1 else self.inverse(images[generator])
            element = self.multiply(element, image)
        return element

    def generated_subgroup(self, elements: list[int]) -> set[int]:
        """Closure of ``elements`` under multiplication (finite, so inverses come for free)."""
        reached = {self.identity}
        frontier = [self.identity]
        while frontier:
            g = frontier.pop()
            for h in elements:
                product = self.multiply(g, h)
                if product not in reached:
                    reached.add(product)
                    frontier.append(product)
        return reached


def filtration_dims(group: FiniteGroupTable, p: int, max_n: int) -> list[int]:
    """a_n = dim KG / b^(n+1) over GF(p) for 0 <= n <= max_n.

    b is spanned by e_g - e_1; b^(n+1) is spanned by the products v*(e_g - e_1) with v in a
    basis of b^n. Right multiplication by e_g permutes coordinates, so each product is a
    column permutation of v minus v.
    """
    p = PrimeField(p).p
    if max_n < 0:
        raise ParameterRangeError(f"max-n must be nonnegative, got {max_n}")
    m = group.order
    others = [g for g in range(m) if g != group.identity]
    if not others:
        return [1] * (max_n + 1)

    augmentation = np.zeros((len(others), m), dtype=np.int64)
    for row, g in enumerate(others):
        augmentation[row, g] = 1
        augmentation[row, group.identity] = p - 1
    power = row_basis_mod_p(augmentation, p)

    dims = [m - power.shape[0]]
    while len(dims) <= max_n:
        products = []
        for g in others:
            shifted = np.zeros_like(power)
            shifted[:, group.table[:, g]] = power
            products.append((shifted - power) % p)
        following = row_basis_mod_p(np.vstack(products), p)
        if following.shape[0] == power.shape[0]:
            # stable: every further power is the same subspace
            dims.extend([m - following.shape[0]] * (max_n + 1 - len(dims)))
            break
        power = following
        dims.append(m - power.shape[0])
    logger.debug("Filtration dims over GF(%d) for a group of order %d: %s", p, m, dims)
    return dims


def parse_group_table(text: str) -> FiniteGroupTable:
    """Parse the .gtab grammar.

    Raises:
        PresentationSyntaxError: On malformed lines.
        InvalidGroupTableError: If the table is not a group.
    """
    lines = [(number, raw.split("#", 1)[0].split()) for number, raw in enumerate(normalize_line_endings(text).split("\n"), start=1)]
    lines = [(number, words) for number, words in lines if words]
    if not lines or lines[0][1][0] != "order" or len(lines[0][1]) != 2 or not lines[0][1][1].isdigit():
        raise PresentationSyntaxError("the first statement must be 'order <m>'", lines[0][0] if lines else 1, 1)
    m = int(lines[0][1][1])
    if m < 1:
        raise InvalidGroupTableError("Group order must be positive")
    if len(lines) < m + 2:
        raise PresentationSyntaxError(f"expected {m} table rows and an 'id' line", lines[-1][0], 1)
    rows = []
    for number, words in lines[1 : m + 1]:
        if len(words) != m or not all(w.isdigit() for w in words):
            raise PresentationSyntaxError(f"expected {m} element indices", number, 1)
        rows.append([int(w) for w in words])
    number, words = lines[m + 1]
    if words[0] != "id" or len(words) != 2 or not words[1].isdigit():
        raise PresentationSyntaxError("expected 'id <index>'", number, 1)
    identity = int(words[1])
    generators = []
    for number, words in lines[m + 2 :]:
        if words[0] != "gen" or len(words) != 3 or not words[2].isdigit():
            raise PresentationSyntaxError("expected 'gen <name> <index>'", number, 1)
        generators.append((words[1], int(words[2])))
    return FiniteGroupTable(np.array(rows, dtype=np.int64), identity, tuple(generators))
