"""Graded presentations B = K<X | R> and the .alg file format.

Grammar (line oriented, ``#`` starts a comment)::

    field gf <p> | field q
    gen <name> <degree>
    rel <degree> <expr>

``expr`` is a signed sum of terms ``[<coefficient>[*]]<monomial>``; a monomial joins
generator names with ``*`` and allows ``name^k``; the literal ``0`` is the zero relation.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction

from app.exceptions import InputError, InvalidFieldError, NonHomogeneousRelationError, NonzeroConstantTermError, ParameterRangeError, PresentationSyntaxError, UnknownGeneratorError
from app.fields import Field, Scalar, field_from_descriptor
from app.free_algebra import FreePoly, Generator, Word, poly_add, right_partial
from app.sanitization import normalize_line_endings, sanitize_for_logging

logger = logging.getLogger(__name__)

NAME_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
TOKEN_PATTERN = re.compile(r"\s*(?:(?P<number>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^]))")


@dataclass(frozen=True)
class Relation:
    """A homogeneous relation with its assigned degree."""

    poly: FreePoly
    degree: int


@dataclass(frozen=True)
class Presentation:
    """A finite graded presentation over an exact field."""

    field: Field
    generators: tuple[Generator, ...]
    relations: tuple[Relation, ...]

    def __post_init__(self) -> None:
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise InputError(f"Duplicate generator names in {names}")
        for generator in self.generators:
            if generator.degree < 1:
                raise ParameterRangeError(f"Generator {generator.name} must have positive degree")
        for relation in self.relations:
            validate_relation(relation)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(g.degree for g in self.generators)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def generator_word(self, x: int) -> Word:
        return Word(self.generators[x].degree, (x,))

    def partial(self, f: FreePoly, x: int) -> FreePoly:
        """Right partial derivative df/dx with respect to generator index ``x``."""
        return right_partial(f, x, self.generators[x].degree)

    def generator_counts(self) -> dict[int, int]:
        """x_n: number of generators in each degree."""
        counts: dict[int, int] = {}
        for generator in self.generators:
            counts[generator.degree] = counts.get(generator.degree, 0) + 1
        return counts

    def relation_counts(self) -> dict[int, int]:
        """r_n: number of relations assigned each degree (repetitions counted)."""
        counts: dict[int, int] = {}
        for relation in self.relations:
            counts[relation.degree] = counts.get(relation.degree, 0) + 1
        return counts

    def with_relation(self, relation: Relation) -> Presentation:
        return Presentation(self.field, self.generators, (*self.relations, relation))


def validate_relation(relation: Relation) -> None:
    """Check homogeneity and the zero constant term of a relation."""
    if relation.degree < 1:
        raise NonHomogeneousRelationError(f"Relation degree must be positive, got {relation.degree}")
    if not relation.poly.field.is_zero(relation.poly.constant_term()):
        raise NonzeroConstantTermError("Relation has a nonzero constant term")
    stray = relation.poly.degrees() - {relation.degree}
    if stray:
        raise NonHomogeneousRelationError(f"Relation of degree {relation.degree} contains words of degree {sorted(stray)}")


class _ExpressionParser:
    """Recursive-descent parser for one relation expression."""

    def __init__(self, text: str, line: int, column: int, field: Field, generators: dict[str, tuple[int, int]]) -> None:
        self.text = text
        self.line = line
        self.offset = column
        self.field = field
        self.generators = generators
        self.tokens = self._tokenize()
        self.position = 0

    def _tokenize(self) -> list[tuple[str, str, int]]:
        tokens: list[tuple[str, str, int]] = []
        index = 0
        stripped = self.text.rstrip()
        while index < len(stripped):
            match = TOKEN_PATTERN.match(stripped, index)
            if match is None or match.end() == index:
                bad = len(stripped) - len(stripped[index:].lstrip())
                raise PresentationSyntaxError(f"unexpected character {stripped[bad]!r}", self.line, self.offset + bad)
            kind = match.lastgroup or "op"
            tokens.append((kind, match.group(kind), self.offset + match.start(kind)))
            index = match.end()
        return tokens

    def _peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.position] if self.position < len(self.tokens) else None

    def _next(self) -> tuple[str, str, int]:
        token = self._peek()
        if token is None:
            raise PresentationSyntaxError("unexpected end of expression", self.line, self.offset + len(self.text.rstrip()))
        self.position += 1
        return token

    def parse(self) -> FreePoly:
        if not self.tokens:
            raise PresentationSyntaxError("missing expression", self.line, self.offset)
        total = FreePoly.zero(self.field)
        sign = 1
        token = self._peek()
        if token is not None and token[1] in "+-" and token[0] == "op":
            sign = -1 if self._next()[1] == "-" else 1
        while True:
            total = poly_add(total, self._term(sign))
            token = self._peek()
            if token is None:
                return total
            kind, value, column = self._next()
            if kind != "op" or value not in "+-":
                raise PresentationSyntaxError(f"expected '+' or '-', got {value!r}", self.line, column)
            sign = -1 if value == "-" else 1

    def _term(self, sign: int) -> FreePoly:
        coefficient: Fraction = Fraction(sign)
        token = self._peek()
        if token is not None and token[0] == "number":
            coefficient *= Fraction(self._next()[1])
            follower = self._peek()
            if follower is None or (follower[0] == "op" and follower[1] in "+-"):
                return FreePoly.monomial(self.field, Word.empty(), self._scalar(coefficient, token[2]))
            if follower[0] == "op" and follower[1] == "*":
                self._next()
        letters: list[int] = []
        degree = 0
        while True:
            kind, value, column = self._next()
            if kind != "name":
                raise PresentationSyntaxError(f"expected a generator name, got {value!r}", self.line, column)
            if value not in self.generators:
                raise UnknownGeneratorError(f"line {self.line}, column {column}: unknown generator {sanitize_for_logging(value)!r}")
            index, generator_degree = self.generators[value]
            power = 1
            follower = self._peek()
            if follower is not None and follower[1] == "^":
                self._next()
                kind, exponent, column = self._next()
                if kind != "number" or not exponent.isdigit() or int(exponent) < 1:
                    raise PresentationSyntaxError(f"expected a positive exponent, got {exponent!r}", self.line, column)
                power = int(exponent)
            letters.extend([index] * power)
            degree += generator_degree * power
            follower = self._peek()
            if follower is None or follower[1] != "*":
                break
            self._next()
        return FreePoly.monomial(self.field, Word(degree, tuple(letters)), self._scalar(coefficient, token[2] if token else self.offset))

    def _scalar(self, value: Fraction, column: int) -> Scalar:
        try:
            return self.field.coerce(value)
        except InvalidFieldError as e:
            raise PresentationSyntaxError(str(e), self.line, column) from e


def _split_comment(raw: str) -> str:
    return raw.split("#", 1)[0]


def parse_presentation(text: str) -> Presentation:
    """Parse and validate a presentation written in the .alg grammar.

    Args:
        text: File content.

    Returns:
        Presentation: The validated presentation.

    Raises:
        PresentationSyntaxError: On malformed lines, with line and column.
        UnknownGeneratorError, NonHomogeneousRelationError, NonzeroConstantTermError,
        InvalidFieldError: On semantic errors.
    """
    field: Field | None = None
    generators: list[Generator] = []
    lookup: dict[str, tuple[int, int]] = {}
    relations: list[Relation] = []

    for line_number, raw in enumerate(normalize_line_endings(text).split("\n"), start=1):
        content = _split_comment(raw)
        words = content.split()
        if not words:
            continue
        keyword = words[0]
        column = content.index(keyword) + 1
        if keyword == "field":
            if field is not None:
                raise PresentationSyntaxError("duplicate field statement", line_number, column)
            field = field_from_descriptor(words[1:])
            continue
        if field is None:
            raise PresentationSyntaxError("the first statement must be 'field gf <p>' or 'field q'", line_number, column)
        if keyword == "gen":
            if relations:
                raise PresentationSyntaxError("generators must be declared before relations", line_number, column)
            if len(words) != 3 or not NAME_PATTERN.fullmatch(words[1]) or not words[2].isdigit():
                raise PresentationSyntaxError("expected 'gen <name> <degree>'", line_number, column)
            name, degree = words[1], int(words[2])
            if degree < 1:
                raise PresentationSyntaxError("generator degree must be positive", line_number, content.rindex(words[2]) + 1)
            if name in lookup:
                raise PresentationSyntaxError(f"duplicate generator {name!r}", line_number, content.index(name) + 1)
            lookup[name] = (len(generators), degree)
            generators.append(Generator(name, degree))
        elif keyword == "rel":
            if len(words) < 3 or not words[1].isdigit() or int(words[1]) < 1:
                raise PresentationSyntaxError("expected 'rel <degree> <expr>'", line_number, column)
            degree_at = content.index(words[1], column)
            expression_at = degree_at + len(words[1])
            poly = _ExpressionParser(content[expression_at:], line_number, expression_at + 1, field, lookup).parse()
            relation = Relation(poly, int(words[1]))
            validate_relation(relation)
            relations.append(relation)
        else:
            raise PresentationSyntaxError(f"unknown statement {sanitize_for_logging(keyword)!r}", line_number, column)

    if field is None:
        raise PresentationSyntaxError("empty presentation", 1, 1)
    presentation = Presentation(field, tuple(generators), tuple(relations))
    logger.debug("Parsed presentation over %s with %d generators and %d relations", field.descriptor, len(generators), len(relations))
    return presentation


def format_presentation(presentation: Presentation) -> str:
    """Print a presentation in the .alg grammar with canonical coefficients."""
    lines = [f"field {presentation.field.descriptor}"]
    lines.extend(f"gen {g.name} {g.degree}" for g in presentation.generators)
    lines.extend(f"rel {r.degree} {r.poly.render(presentation.names)}" for r in presentation.relations)
    return "\n".join(lines) + "\n"
