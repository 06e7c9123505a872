"""Exception hierarchy for gs-forge."""


class GsForgeError(Exception):
    """Base class for all errors raised by gs-forge."""


class InputError(GsForgeError):
    """Invalid user input: maps to exit code 2."""


class PresentationSyntaxError(InputError):
    """Syntax error in an input file, reported with its position."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class UnknownGeneratorError(InputError):
    """A relation or word mentions a generator that was not declared."""


class NonHomogeneousRelationError(InputError):
    """A relation contains words of a degree other than its assigned degree."""


class NonzeroConstantTermError(InputError):
    """An element that must lie in the augmentation ideal has a constant term."""


class InvalidFieldError(InputError):
    """Unsupported field descriptor or non-prime modulus."""


class ParameterRangeError(InputError):
    """A numeric parameter lies outside its admissible range."""


class PreconditionError(InputError):
    """The hypotheses of a lemma or operation are not met."""


class InvalidGroupTableError(InputError):
    """A multiplication table does not describe a group."""


class DegreeUnavailableError(InputError):
    """A relator degree could neither be read nor computed."""


class FieldMismatchError(GsForgeError):
    """Arithmetic between elements over different fields."""


class InternalInconsistencyError(GsForgeError):
    """A proven identity failed to hold: signals an implementation bug."""
