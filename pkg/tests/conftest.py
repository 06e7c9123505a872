"""Test configuration and fixtures."""

import logging
from collections.abc import Generator
from pathlib import Path

import pytest

from app.fields import QQ, PrimeField
from app.free_algebra import FreePoly, Generator as AlgebraGenerator, Word
from app.presentation import Presentation, Relation
from app.run_metrics import reset_run_metrics

# Create a custom logger
logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(autouse=True)
def reset_metrics() -> Generator[None]:
    """Reset the run metrics singleton before and after each test."""
    reset_run_metrics()
    yield
    reset_run_metrics()


@pytest.fixture
def data_dir() -> Path:
    """Directory with the sample .alg, .grp and .gtab files."""
    return DATA_DIR


@pytest.fixture
def commutative_pair() -> Presentation:
    """K<x, y | xy - yx> over the rationals."""
    xy = Word(2, (0, 1))
    yx = Word(2, (1, 0))
    relation = Relation(FreePoly.from_mapping(QQ, {xy: 1, yx: -1}), 2)
    return Presentation(QQ, (AlgebraGenerator("x", 1), AlgebraGenerator("y", 1)), (relation,))


@pytest.fixture
def squares_gf2() -> Presentation:
    """GF(2)<x, y | x^2, y^2>."""
    field = PrimeField(2)
    relations = (
        Relation(FreePoly.monomial(field, Word(2, (0, 0))), 2),
        Relation(FreePoly.monomial(field, Word(2, (1, 1))), 2),
    )
    return Presentation(field, (AlgebraGenerator("x", 1), AlgebraGenerator("y", 1)), relations)
