"""Words and polynomials of the free associative algebra K<X>.

Words are ordered degree-lexicographically (deglex): first by weighted degree, then
lexicographically by generator index, where generators are indexed in declaration order.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cache

from app.exceptions import NonzeroConstantTermError
from app.fields import Field, Scalar


@dataclass(frozen=True)
class Generator:
    """A named generator of positive degree."""

    name: str
    degree: int


@dataclass(frozen=True, order=True)
class Word:
    """A monomial: a sequence of generator indices with its cached weighted degree.

    The field order (degree first, then letters) makes the dataclass ordering deglex.
    """

    degree: int
    letters: tuple[int, ...]

    @classmethod
    def of(cls, letters: Iterable[int], degrees: Sequence[int]) -> Word:
        letters = tuple(letters)
        return cls(sum(degrees[i] for i in letters), letters)

    @classmethod
    def empty(cls) -> Word:
        return cls(0, ())

    def __mul__(self, other: Word) -> Word:
        return Word(self.degree + other.degree, self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def render(self, names: Sequence[str]) -> str:
        """Render as ``x*y^2``; the empty word renders as ``1``."""
        if not self.letters:
            return "1"
        parts: list[str] = []
        run_letter, run_length = self.letters[0], 0
        for letter in (*self.letters, -1):
            if letter == run_letter:
                run_length += 1
                continue
            parts.append(names[run_letter] if run_length == 1 else f"{names[run_letter]}^{run_length}")
            run_letter, run_length = letter, 1
        return "*".join(parts)


@dataclass(frozen=True)
class FreePoly:
    """A finitely supported combination of words with nonzero coefficients.

    ``terms`` is kept sorted in deglex order, so two polynomials are equal exactly when
    their term maps are equal.
    """

    field: Field
    terms: tuple[tuple[Word, Scalar], ...]

    @classmethod
    def from_mapping(cls, field: Field, mapping: Mapping[Word, Scalar]) -> FreePoly:
        terms = []
        for word in sorted(mapping):
            coefficient = field.coerce(mapping[word])
            if not field.is_zero(coefficient):
                terms.append((word, coefficient))
        return cls(field, tuple(terms))

    @classmethod
    def zero(cls, field: Field) -> FreePoly:
        return cls(field, ())

    @classmethod
    def monomial(cls, field: Field, word: Word, coefficient: Scalar = 1) -> FreePoly:
        return cls.from_mapping(field, {word: coefficient})

    def as_dict(self) -> dict[Word, Scalar]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {word.degree for word, _ in self.terms}

    def constant_term(self) -> Scalar:
        return self.as_dict().get(Word.empty(), self.field.zero)

    def render(self, names: Sequence[str]) -> str:
        """Render in the .alg expression grammar, terms in deglex order."""
        if not self.terms:
            return "0"
        pieces: list[str] = []
        for index, (word, coefficient) in enumerate(self.terms):
            sign = "+"
            if isinstance(coefficient, Fraction) and coefficient < 0:
                sign, coefficient = "-", -coefficient
            text = self.field.format(coefficient)
            if word.letters:
                text = word.render(names) if coefficient == 1 else f"{text}*{word.render(names)}"
            if index == 0:
                pieces.append(text if sign == "+" else f"-{text}")
            else:
                pieces.append(f"{sign} {text}")
        return " ".join(pieces)

    def __add__(self, other: FreePoly) -> FreePoly:
        return poly_add(self, other)

    def __sub__(self, other: FreePoly) -> FreePoly:
        return poly_add(self, poly_scale(self.field.neg(self.field.one), other))

    def __mul__(self, other: FreePoly) -> FreePoly:
        return poly_mul(self, other)


def poly_add(f: FreePoly, g: FreePoly) -> FreePoly:
    """Coefficientwise sum; zero terms are dropped."""
    f.field.require_same(g.field)
    field = f.field
    total = f.as_dict()
    for word, coefficient in g.terms:
        total[word] = field.add(total.get(word, field.zero), coefficient)
    return FreePoly.from_mapping(field, total)


def poly_scale(c: Scalar, f: FreePoly) -> FreePoly:
    """Multiply every coefficient of ``f`` by the scalar ``c``."""
    field = f.field
    return FreePoly.from_mapping(field, {word: field.mul(c, coefficient) for word, coefficient in f.terms})


def poly_mul(f: FreePoly, g: FreePoly) -> FreePoly:
    """Bilinear extension of word concatenation."""
    f.field.require_same(g.field)
    field = f.field
    product: dict[Word, Scalar] = {}
    for u, a in f.terms:
        for v, b in g.terms:
            word = u * v
            product[word] = field.add(product.get(word, field.zero), field.mul(a, b))
    return FreePoly.from_mapping(field, product)


def right_partial(f: FreePoly, x: int, x_degree: int) -> FreePoly:
    """The left coefficient of generator ``x`` in ``f = sum_x (df/dx)*x``.

    Args:
        f: Polynomial with zero constant term.
        x: Generator index.
        x_degree: Degree of that generator.

    Returns:
        FreePoly: Sum over the words ``w*x`` of ``f`` of the coefficient times ``w``.

    Raises:
        NonzeroConstantTermError: If ``f`` has a nonzero constant term.
    """
    partial: dict[Word, Scalar] = {}
    for word, coefficient in f.terms:
        if not word.letters:
            raise NonzeroConstantTermError("Partial derivatives need a zero constant term")
        if word.letters[-1] == x:
            partial[Word(word.degree - x_degree, word.letters[:-1])] = coefficient
    return FreePoly.from_mapping(f.field, partial)


def reconstruct_from_partials(partials: Sequence[FreePoly], degrees: Sequence[int]) -> FreePoly:
    """Return ``sum_x partials[x] * x``; inverse of taking all right partials."""
    field = partials[0].field
    total = FreePoly.zero(field)
    for x, partial in enumerate(partials):
        total = poly_add(total, poly_mul(partial, FreePoly.monomial(field, Word(degrees[x], (x,)))))
    return total


def monomials_of_degree(degrees: Sequence[int], n: int) -> list[Word]:
    """All words of weighted degree ``n`` in deglex order.

    Args:
        degrees: Generator degrees in declaration order.
        n: Target degree; a negative value yields an empty list.

    Returns:
        list[Word]: The monomial basis of F_n.
    """
    return list(_monomials(tuple(degrees), n))


@cache
def _monomials(degrees: tuple[int, ...], n: int) -> tuple[Word, ...]:
    if n < 0:
        return ()
    if n == 0:
        return (Word.empty(),)
    words = [Word(n, (x, *tail.letters)) for x, d in enumerate(degrees) if d <= n for tail in _monomials(degrees, n - d)]
    return tuple(sorted(words))


@cache
def monomial_count(degrees: tuple[int, ...], n: int) -> int:
    """Number of words of weighted degree ``n`` (dim F_n)."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    return sum(monomial_count(degrees, n - d) for d in degrees if d <= n)
