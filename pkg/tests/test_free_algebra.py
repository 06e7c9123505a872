"""Tests for words and polynomials of the free associative algebra."""

import random
from fractions import Fraction

import pytest

from app.exceptions import FieldMismatchError, NonzeroConstantTermError
from app.fields import QQ, PrimeField
from app.free_algebra import FreePoly, Word, monomial_count, monomials_of_degree, poly_add, poly_mul, poly_scale, reconstruct_from_partials, right_partial


class TestWord:
    """Tests for Word ordering and rendering."""

    def test_deglex_order(self) -> None:
        """Test that words sort by degree first, then lexicographically."""
        degrees = (1, 1)
        words = [Word.of(letters, degrees) for letters in [(1,), (0, 0), (0,), (1, 0), (0, 1)]]
        assert [w.letters for w in sorted(words)] == [(0,), (1,), (0, 0), (0, 1), (1, 0)]

    def test_weighted_degree(self) -> None:
        """Test that the degree is the sum of generator weights."""
        assert Word.of((0, 1, 1), (1, 2)).degree == 5
        assert Word.empty().degree == 0

    def test_render(self) -> None:
        """Test the x*y^2 rendering and the empty word."""
        names = ("x", "y")
        assert Word.of((0, 1, 1, 0), (1, 1)).render(names) == "x*y^2*x"
        assert Word.empty().render(names) == "1"


class TestPolynomialArithmetic:
    """Tests for poly_add, poly_scale and poly_mul."""

    def test_add_cancels(self) -> None:
        """Test that cancelling terms disappear."""
        x = Word(1, (0,))
        f = FreePoly.from_mapping(QQ, {x: 1})
        assert poly_add(f, poly_scale(-1, f)).is_zero()

    def test_char_p_cancellation(self) -> None:
        """Test that 2x = 0 in characteristic 2."""
        field = PrimeField(2)
        x = FreePoly.monomial(field, Word(1, (0,)))
        assert (x + x).is_zero()

    def test_mul_is_concatenation(self) -> None:
        """Test (x + y)^2 = x^2 + xy + yx + y^2 in deglex order."""
        x, y = Word(1, (0,)), Word(1, (1,))
        s = FreePoly.from_mapping(QQ, {x: 1, y: 1})
        square = poly_mul(s, s)
        assert [w.letters for w, _ in square.terms] == [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert all(c == 1 for _, c in square.terms)

    def test_mul_is_not_commutative(self) -> None:
        """Test xy != yx."""
        x = FreePoly.monomial(QQ, Word(1, (0,)))
        y = FreePoly.monomial(QQ, Word(1, (1,)))
        assert x * y != y * x

    @pytest.mark.parametrize("field", [QQ, PrimeField(5)])
    def test_ring_axioms_on_random_polynomials(self, field: object) -> None:
        """Test (fg)h = f(gh), f(g + h) = fg + fh and (f + g)h = fh + gh."""
        rng = random.Random(11)
        degrees = (1, 2)
        words = [w for n in range(4) for w in monomials_of_degree(degrees, n)]

        def random_poly() -> FreePoly:
            return FreePoly.from_mapping(field, {w: rng.randint(-3, 3) for w in rng.sample(words, 3)})

        for _ in range(40):
            f, g, h = random_poly(), random_poly(), random_poly()
            assert poly_mul(poly_mul(f, g), h) == poly_mul(f, poly_mul(g, h))
            assert poly_mul(f, poly_add(g, h)) == poly_add(poly_mul(f, g), poly_mul(f, h))
            assert poly_mul(poly_add(f, g), h) == poly_add(poly_mul(f, h), poly_mul(g, h))

    def test_field_mismatch(self) -> None:
        """Test that mixing fields raises."""
        x = Word(1, (0,))
        with pytest.raises(FieldMismatchError):
            poly_add(FreePoly.monomial(QQ, x), FreePoly.monomial(PrimeField(3), x))

    def test_render(self) -> None:
        """Test rendering with signs and rational coefficients."""
        x, y = Word(1, (0,)), Word(1, (1,))
        f = FreePoly.from_mapping(QQ, {x * y: 1, y * x: -1, x * x: Fraction(1, 2)})
        assert f.render(("x", "y")) == "1/2*x^2 + x*y - y*x"
        assert FreePoly.zero(QQ).render(("x",)) == "0"


class TestPartials:
    """Tests for right partial derivatives and their reconstruction."""

    def test_partials_of_commutator(self) -> None:
        """Test d(xy - yx)/dx = -y and d(xy - yx)/dy = x."""
        x, y = Word(1, (0,)), Word(1, (1,))
        f = FreePoly.from_mapping(QQ, {x * y: 1, y * x: -1})
        assert right_partial(f, 0, 1) == FreePoly.from_mapping(QQ, {y: -1})
        assert right_partial(f, 1, 1) == FreePoly.from_mapping(QQ, {x: 1})

    def test_constant_term_rejected(self) -> None:
        """Test that a nonzero constant term is rejected."""
        f = FreePoly.from_mapping(QQ, {Word.empty(): 1, Word(1, (0,)): 1})
        with pytest.raises(NonzeroConstantTermError):
            right_partial(f, 0, 1)

    def test_reconstruction_on_random_polynomials(self) -> None:
        """Test f = sum_x (df/dx) x on random polynomials without constant term."""
        rng = random.Random(7)
        degrees = (1, 2, 1)
        for _ in range(50):
            n = rng.randint(1, 5)
            words = monomials_of_degree(degrees, n)
            mapping = {w: rng.randint(-4, 4) for w in rng.sample(words, min(4, len(words)))}
            f = FreePoly.from_mapping(QQ, mapping)
            partials = [right_partial(f, x, d) for x, d in enumerate(degrees)]
            assert reconstruct_from_partials(partials, degrees) == f


class TestMonomials:
    """Tests for monomial enumeration."""

    @pytest.mark.parametrize(
        ("degrees", "n", "expected"),
        [
            ((1, 1), 0, 1),
            ((1, 1), 3, 8),
            ((1, 1, 1), 4, 81),
            ((1, 2), 4, 5),
            ((2,), 3, 0),
            ((1,), -1, 0),
        ],
    )
    def test_monomial_count(self, degrees: tuple[int, ...], n: int, expected: int) -> None:
        """Test dim F_n for weighted generators."""
        assert monomial_count(degrees, n) == expected
        assert len(monomials_of_degree(degrees, n)) == expected

    def test_enumeration_is_sorted_and_homogeneous(self) -> None:
        """Test that monomials come out in deglex order with the right degree."""
        words = monomials_of_degree((1, 2), 5)
        assert words == sorted(words)
        assert all(w.degree == 5 for w in words)
        assert len(set(words)) == len(words)
