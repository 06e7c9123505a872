"""Shared pydantic building blocks for check reports."""

from fractions import Fraction
from typing import Annotated

from pydantic import BaseModel, ConfigDict, PlainSerializer

# Exact rationals travel through JSON as "p/q" strings
ExactRational = Annotated[Fraction, PlainSerializer(str, return_type=str)]


class Report(BaseModel):
    """Immutable report model; every check returns one of these."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)
