"""Free group words, their group algebra, Fox derivatives and Magnus degrees.

.grp grammar (line oriented, ``#`` starts a comment)::

    gen <name>
    rel [<degree>] <word>

A word joins ``name`` or ``name^k`` (k a nonzero integer) with ``*``; ``1`` is the empty
word. Relators are freely reduced on input.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

from app.constants import DEFAULT_MAGNUS_CAP
from app.exceptions import DegreeUnavailableError, FieldMismatchError, ParameterRangeError, PresentationSyntaxError, UnknownGeneratorError
from app.fields import QQ, Field, Scalar
from app.sanitization import normalize_line_endings, sanitize_for_logging

logger = logging.getLogger(__name__)

Letter = tuple[int, int]
FACTOR_PATTERN = re.compile(r"(?P<name>[A-Za-z_][A-Za-z0-9_]*)(?:\^(?P<exponent>-?\d+))?")


@dataclass(frozen=True)
class GroupWord:
    """A freely reduced word: letters are (generator index, +1 or -1)."""

    letters: tuple[Letter, ...]

    @classmethod
    def of(cls, letters: Iterable[Letter]) -> GroupWord:
        """Freely reduce ``letters``."""
        stack: list[Letter] = []
        for generator, exponent in letters:
            if exponent not in (1, -1):
                raise ParameterRangeError(f"Letter exponents must be +1 or -1, got {exponent}")
            if stack and stack[-1] == (generator, -exponent):
                stack.pop()
            else:
                stack.append((generator, exponent))
        return cls(tuple(stack))

    @classmethod
    def identity(cls) -> GroupWord:
        return cls(())

    @classmethod
    def generator(cls, x: int, exponent: int = 1) -> GroupWord:
        return cls.of([(x, 1 if exponent > 0 else -1)] * abs(exponent))

    def is_identity(self) -> bool:
        return not self.letters

    def inverse(self) -> GroupWord:
        return GroupWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def __mul__(self, other: GroupWord) -> GroupWord:
        return GroupWord.of(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def sort_key(self) -> tuple[int, tuple[Letter, ...]]:
        return len(self.letters), self.letters

    def exponent_sums(self, generator_count: int) -> list[int]:
        sums = [0] * generator_count
        for generator, exponent in self.letters:
            sums[generator] += exponent
        return sums

    def render(self, names: Sequence[str]) -> str:
        """Render as ``x*y^-1*x^2``; the identity renders as ``1``."""
        if not self.letters:
            return "1"
        parts: list[str] = []
        index = 0
        while index < len(self.letters):
            generator, exponent = self.letters[index]
            run = 1
            while index + run < len(self.letters) and self.letters[index + run] == (generator, exponent):
                run += 1
            power = run * exponent
            parts.append(names[generator] if power == 1 else f"{names[generator]}^{power}")
            index += run
        return "*".join(parts)


@dataclass(frozen=True)
class FreeGroupAlgebraElement:
    """A finite combination of reduced words with nonzero coefficients."""

    field: Field
    terms: tuple[tuple[GroupWord, Scalar], ...]

    @classmethod
    def from_mapping(cls, field: Field, mapping: Mapping[GroupWord, Scalar]) -> FreeGroupAlgebraElement:
        terms = []
        for word in sorted(mapping, key=GroupWord.sort_key):
            coefficient = field.coerce(mapping[word])
            if not field.is_zero(coefficient):
                terms.append((word, coefficient))
        return cls(field, tuple(terms))

    @classmethod
    def zero(cls, field: Field) -> FreeGroupAlgebraElement:
        return cls(field, ())

    @classmethod
    def of_word(cls, field: Field, word: GroupWord, coefficient: Scalar = 1) -> FreeGroupAlgebraElement:
        return cls.from_mapping(field, {word: coefficient})

    @classmethod
    def word_minus_one(cls, field: Field, word: GroupWord) -> FreeGroupAlgebraElement:
        """w - 1."""
        return cls.of_word(field, word) - cls.of_word(field, GroupWord.identity())

    def as_dict(self) -> dict[GroupWord, Scalar]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def augmentation(self) -> Scalar:
        """Image under every word -> 1."""
        total = self.field.zero
        for _, coefficient in self.terms:
            total = self.field.add(total, coefficient)
        return total

    def _require_same(self, other: FreeGroupAlgebraElement) -> None:
        if self.field != other.field:
            raise FieldMismatchError(f"Field mismatch: {self.field.descriptor} vs {other.field.descriptor}")

    def __add__(self, other: FreeGroupAlgebraElement) -> FreeGroupAlgebraElement:
        self._require_same(other)
        total = self.as_dict()
        for word, coefficient in other.terms:
            total[word] = self.field.add(total.get(word, self.field.zero), coefficient)
        return FreeGroupAlgebraElement.from_mapping(self.field, total)

    def __neg__(self) -> FreeGroupAlgebraElement:
        return FreeGroupAlgebraElement.from_mapping(self.field, {w: self.field.neg(c) for w, c in self.terms})

    def __sub__(self, other: FreeGroupAlgebraElement) -> FreeGroupAlgebraElement:
        return self + (-other)

    def __mul__(self, other: FreeGroupAlgebraElement) -> FreeGroupAlgebraElement:
        self._require_same(other)
        field = self.field
        product: dict[GroupWord, Scalar] = {}
        for u, a in self.terms:
            for v, b in other.terms:
                word = u * v
                product[word] = field.add(product.get(word, field.zero), field.mul(a, b))
        return FreeGroupAlgebraElement.from_mapping(field, product)

    def render(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        pieces: list[str] = []
        for word, coefficient in self.terms:
            negative = self.field.characteristic == 0 and coefficient < 0
            magnitude = -coefficient if negative else coefficient
            text = self.field.format(magnitude)
            body = text if word.is_identity() else (word.render(names) if magnitude == 1 else f"{text}*{word.render(names)}")
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f"{'-' if negative else '+'} {body}")
        return " ".join(pieces)


def fox_derivative(word: GroupWord, x: int, field: Field = QQ, generator_count: int | None = None) -> FreeGroupAlgebraElement:
    """d(w - 1)/d(x - 1) by the product rule.

    A letter x contributes the prefix before it; a letter x^-1 contributes minus the
    prefix times x^-1. The result satisfies sum_x D_x(w) * (x - 1) = w - 1.

    Raises:
        UnknownGeneratorError: If ``x`` is not a generator index.
    """
    if x < 0 or (generator_count is not None and x >= generator_count):
        raise UnknownGeneratorError(f"Unknown generator index {x}")
    total: dict[GroupWord, Scalar] = {}
    prefix = GroupWord.identity()
    for generator, exponent in word.letters:
        if generator == x:
            if exponent == 1:
                total[prefix] = field.add(total.get(prefix, field.zero), field.one)
            else:
                term = prefix * GroupWord(((x, -1),))
                total[term] = field.sub(total.get(term, field.zero), field.one)
        prefix = prefix * GroupWord(((generator, exponent),))
    return FreeGroupAlgebraElement.from_mapping(field, total)


def fox_reconstruction(word: GroupWord, field: Field, generator_count: int) -> FreeGroupAlgebraElement:
    """sum_x D_x(w) * (x - 1), which equals w - 1."""
    total = FreeGroupAlgebraElement.zero(field)
    for x in range(generator_count):
        x_minus_one = FreeGroupAlgebraElement.word_minus_one(field, GroupWord.generator(x))
        total = total + fox_derivative(word, x, field, generator_count) * x_minus_one
    return total


def fox_cocycle_holds(u: GroupWord, v: GroupWord, x: int, field: Field) -> bool:
    """D_x(uv) = D_x(u) + u * D_x(v)."""
    left = fox_derivative(u * v, x, field)
    right = fox_derivative(u, x, field) + FreeGroupAlgebraElement.of_word(field, u) * fox_derivative(v, x, field)
    return left == right


@dataclass(frozen=True)
class AboveCap:
    """Every homogeneous component of the Magnus image vanishes up to ``cap``."""

    cap: int


MagnusPoly = dict[tuple[int, ...], Scalar]


def _truncated_product(field: Field, left: MagnusPoly, right: MagnusPoly, cap: int) -> MagnusPoly:
    product: MagnusPoly = {}
    for u, a in left.items():
        for v, b in right.items():
            if len(u) + len(v) > cap:
                continue
            word = u + v
            value = field.add(product.get(word, field.zero), field.mul(a, b))
            if field.is_zero(value):
                product.pop(word, None)
            else:
                product[word] = value
    return product


def _letter_image(field: Field, generator: int, exponent: int, cap: int) -> MagnusPoly:
    if exponent == 1:
        return {(): field.one, (generator,): field.one}
    # x^-1 -> sum_k (-X)^k
    return {(generator,) * k: field.coerce((-1) ** k) for k in range(cap + 1)}


def magnus_image(element: FreeGroupAlgebraElement, cap: int) -> MagnusPoly:
    """Magnus expansion x -> 1 + X truncated above degree ``cap``; keys are letter tuples."""
    field = element.field
    total: MagnusPoly = {}
    for word, coefficient in element.terms:
        image: MagnusPoly = {(): coefficient}
        for generator, exponent in word.letters:
            image = _truncated_product(field, image, _letter_image(field, generator, exponent, cap), cap)
        for monomial, value in image.items():
            updated = field.add(total.get(monomial, field.zero), value)
            if field.is_zero(updated):
                total.pop(monomial, None)
            else:
                total[monomial] = updated
    return total


def magnus_degree(element: FreeGroupAlgebraElement, cap: int = DEFAULT_MAGNUS_CAP) -> int | AboveCap:
    """Largest i with the element in the i-th power of the augmentation ideal.

    The truncation is raised one degree at a time, so only the terms up to the answer are
    ever expanded.

    Raises:
        ParameterRangeError: For the zero element or a cap below 1.
    """
    if element.is_zero():
        raise ParameterRangeError("The zero element has no degree")
    if cap < 1:
        raise ParameterRangeError(f"Cap must be at least 1, got {cap}")
    if not element.field.is_zero(element.augmentation()):
        return 0
    for degree in range(1, cap + 1):
        if any(len(monomial) == degree for monomial in magnus_image(element, degree)):
            return degree
    return AboveCap(cap)


@dataclass(frozen=True)
class GroupPresentation:
    """Generators and freely reduced relators, each with an optional assigned degree."""

    generators: tuple[str, ...]
    relators: tuple[GroupWord, ...]
    assigned_degrees: tuple[int | None, ...]

    def __post_init__(self) -> None:
        if len(self.relators) != len(self.assigned_degrees):
            raise ParameterRangeError("Every relator needs a degree slot")
        for relator, degree in zip(self.relators, self.assigned_degrees, strict=True):
            if relator.is_identity() and degree is None:
                raise DegreeUnavailableError("A relator equal to 1 needs an explicit degree")
            if degree is not None and degree < 1:
                raise ParameterRangeError(f"Relator degrees must be positive, got {degree}")

    def exponent_matrix(self) -> list[list[int]]:
        """|R| x |X| matrix of exponent sums."""
        return [r.exponent_sums(len(self.generators)) for r in self.relators]


def relator_degrees(presentation: GroupPresentation, field: Field, cap: int = DEFAULT_MAGNUS_CAP) -> list[int]:
    """deg(r - 1) per relator: the assigned degree, else the Magnus degree over ``field``.

    An assigned degree may undercut the Magnus degree but never exceed it; a relator equal
    to 1 accepts any assigned degree.

    Raises:
        DegreeUnavailableError: If a degree exceeds ``cap`` and none was assigned.
        ParameterRangeError: If an assigned degree is larger than the Magnus degree.
    """
    degrees = []
    for index, (relator, assigned) in enumerate(zip(presentation.relators, presentation.assigned_degrees, strict=True)):
        if assigned is not None and relator.is_identity():
            degrees.append(assigned)
            continue
        degree = magnus_degree(FreeGroupAlgebraElement.word_minus_one(field, relator), cap)
        if assigned is not None:
            if not isinstance(degree, AboveCap) and assigned > degree:
                raise ParameterRangeError(f"Relator {index + 1} ({relator.render(presentation.generators)}) is assigned degree {assigned} but deg(r - 1) = {degree} over {field.descriptor}")
            degrees.append(assigned)
            continue
        if isinstance(degree, AboveCap):
            raise DegreeUnavailableError(f"Relator {index + 1} ({relator.render(presentation.generators)}) has degree above {cap}; assign one explicitly")
        degrees.append(degree)
    return degrees


def parse_group_word(text: str, lookup: Mapping[str, int], line: int = 1, column: int = 1) -> GroupWord:
    """Parse ``x*y^-1*x^2`` (or ``1``) into a reduced word."""
    stripped = text.strip()
    if stripped == "1":
        return GroupWord.identity()
    letters: list[Letter] = []
    offset = column + (len(text) - len(text.lstrip()))
    for factor in stripped.split("*"):
        match = FACTOR_PATTERN.fullmatch(factor.strip())
        if match is None:
            raise PresentationSyntaxError(f"malformed factor {sanitize_for_logging(factor)!r}", line, offset)
        name = match.group("name")
        if name not in lookup:
            raise UnknownGeneratorError(f"line {line}, column {offset}: unknown generator {sanitize_for_logging(name)!r}")
        exponent = int(match.group("exponent") or 1)
        if exponent == 0:
            raise PresentationSyntaxError("exponent 0 is not allowed", line, offset)
        letters.extend([(lookup[name], 1 if exponent > 0 else -1)] * abs(exponent))
        offset += len(factor) + 1
    return GroupWord.of(letters)


def parse_group_presentation(text: str) -> GroupPresentation:
    """Parse the .grp grammar.

    Raises:
        PresentationSyntaxError, UnknownGeneratorError, DegreeUnavailableError: On bad input.
    """
    names: list[str] = []
    lookup: dict[str, int] = {}
    relators: list[GroupWord] = []
    degrees: list[int | None] = []
    for line_number, raw in enumerate(normalize_line_endings(text).split("\n"), start=1):
        content = raw.split("#", 1)[0]
        words = content.split()
        if not words:
            continue
        column = content.index(words[0]) + 1
        if words[0] == "gen":
            if relators:
                raise PresentationSyntaxError("generators must be declared before relators", line_number, column)
            if len(words) != 2 or not FACTOR_PATTERN.fullmatch(words[1]) or "^" in words[1]:
                raise PresentationSyntaxError("expected 'gen <name>'", line_number, column)
            if words[1] in lookup:
                raise PresentationSyntaxError(f"duplicate generator {words[1]!r}", line_number, column)
            lookup[words[1]] = len(names)
            names.append(words[1])
        elif words[0] == "rel":
            if len(words) < 2:
                raise PresentationSyntaxError("expected 'rel [<degree>] <word>'", line_number, column)
            degree: int | None = None
            body_start = content.index("rel") + 3
            if len(words) > 2 and words[1].isdigit():
                degree = int(words[1])
                body_start = content.index(words[1], body_start) + len(words[1])
            relator = parse_group_word(content[body_start:], lookup, line_number, body_start + 1)
            if relator.is_identity() and degree is None:
                raise DegreeUnavailableError(f"line {line_number}: a relator equal to 1 needs an explicit degree")
            relators.append(relator)
            degrees.append(degree)
        else:
            raise PresentationSyntaxError(f"unknown statement {sanitize_for_logging(words[0])!r}", line_number, column)
    logger.debug("Parsed group presentation with %d generators and %d relators", len(names), len(relators))
    return GroupPresentation(tuple(names), tuple(relators), tuple(degrees))


def format_group_presentation(presentation: GroupPresentation) -> str:
    lines = [f"gen {name}" for name in presentation.generators]
    for relator, degree in zip(presentation.relators, presentation.assigned_degrees, strict=True):
        prefix = "rel" if degree is None else f"rel {degree}"
        lines.append(f"{prefix} {relator.render(presentation.generators)}")
    return "\n".join(lines) + "\n"
