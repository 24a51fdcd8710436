import random
from fractions import Fraction

import pytest

from src.homkernel.errors import DivisionByZero, NotPrime, ParseError, TypeMismatch, UndeclaredIdentifier
from src.homkernel.fields import FieldDescriptor
from src.homkernel.lexer import tokenize
from src.homkernel.polynomials import Polynomial, PolynomialRing, _grevlex_key, mono_compare, mono_mul


def gf_ring(variables=("x", "y"), weights=None, p=32003):
    weights = weights or (1,) * len(variables)
    return PolynomialRing(FieldDescriptor.prime(p), tuple(variables), tuple(weights))


def qq_ring(variables=("x", "y")):
    return PolynomialRing(FieldDescriptor.rationals(), tuple(variables), (1,) * len(variables))


def test_prime_field_arithmetic_and_symmetric_rendering():
    fld = FieldDescriptor.prime(7)
    assert fld.coerce(-1) == 6
    assert fld.signed(6) == -1
    assert fld.mul(3, fld.inv(3)) == 1
    assert fld.coerce(Fraction(1, 2)) == 4
    assert fld.render(5) == "-2"
    assert str(fld) == "GF(7)"
    assert fld.tag == "gf7"


def test_field_errors_and_tags():
    with pytest.raises(NotPrime):
        FieldDescriptor.prime(12)
    with pytest.raises(DivisionByZero):
        FieldDescriptor.prime(5).inv(0)
    with pytest.raises(ZeroDivisionError):
        FieldDescriptor.rationals().inv(Fraction(0))
    assert FieldDescriptor.from_tag("gf32003") == FieldDescriptor.prime(32003)
    assert FieldDescriptor.from_tag("GF(7)") == FieldDescriptor.prime(7)
    assert FieldDescriptor.from_tag("qq") == FieldDescriptor.rationals()


def test_parse_and_render_canonical_order():
    ring = gf_ring()
    poly = ring.parse("2 - 3*x*y + x^2")
    assert poly.render() == "x^2 - 3*x*y + 2"
    assert poly.leading_monomial() == (2, 0)
    assert ring.parse("y + x").render() == "x + y"
    assert ring.parse("0").render() == "0"


def test_rational_coefficients_render_as_fractions():
    ring = qq_ring()
    assert ring.parse("x/2 + y").render() == "1/2*x + y"
    assert ring.parse("-(x - y)/3").render() == "-1/3*x + 1/3*y"


def test_arithmetic_identities():
    ring = gf_ring()
    x, y = ring.gens()
    assert (x + y) ** 2 == x ** 2 + 2 * x * y + y ** 2
    assert (x + y) * (x - y) == x ** 2 - y ** 2
    assert (x - x).is_zero()
    assert (3 * x).leading_coefficient() == 3
    assert (x * 32003).is_zero()


def test_homogeneity_respects_weights():
    ring = gf_ring(weights=(2, 3))
    assert ring.parse("x^3 + y^2").homogeneity() == (True, 6)
    assert ring.parse("x + y").homogeneity() == (False, None)
    assert ring.zero().homogeneity() == (True, None)
    assert ring.monomials_of_degree(6) == [(3, 0), (0, 2)]


def test_monomials_of_degree_descending():
    ring = gf_ring()
    assert ring.monomials_of_degree(2) == [(2, 0), (1, 1), (0, 2)]
    assert ring.monomials_of_degree(-1) == []


def test_parse_errors_carry_position_and_expected_tokens():
    ring = gf_ring()
    with pytest.raises(ParseError) as excinfo:
        ring.parse("x + * y")
    assert (excinfo.value.line, excinfo.value.column) == (1, 5)
    assert excinfo.value.expected == ["(", "-", "<integer>", "<variable>"]
    with pytest.raises(UndeclaredIdentifier):
        ring.parse("x + z")
    with pytest.raises(TypeMismatch):
        ring.parse("x / y")
    with pytest.raises(TypeMismatch):
        ring.parse("x / 0")


def test_tokenizer_skips_comments_and_tracks_lines():
    tokens = tokenize("ring R # a comment\n  == ;")
    assert [t.text for t in tokens[:-1]] == ["ring", "R", "==", ";"]
    assert (tokens[2].line, tokens[2].column) == (2, 3)
    with pytest.raises(ParseError):
        tokenize("x $ y")


def random_monomial(rng, nvars, top=3):
    return tuple(rng.randint(0, top) for _ in range(nvars))


def random_poly(ring, rng, terms=4):
    return Polynomial.from_terms(
        ring, [(ring.field.coerce(rng.randint(-9, 9)), random_monomial(rng, ring.nvars)) for _ in range(terms)]
    )


def test_monomial_order_is_a_multiplicative_total_order():
    rng = random.Random(5)
    for ring in (gf_ring(("x", "y", "z")), gf_ring(("x", "y", "z"), weights=(1, 2, 3))):
        one = ring.one_monomial()
        for _ in range(200):
            a, b, c = (random_monomial(rng, 3) for _ in range(3))
            assert mono_compare(ring, a, b) == -mono_compare(ring, b, a)
            assert (mono_compare(ring, a, b) == 0) == (a == b)
            assert mono_compare(ring, a, b) == mono_compare(ring, mono_mul(a, c), mono_mul(b, c))
            if a != one:
                assert mono_compare(ring, one, a) == -1
        monos = [random_monomial(rng, 3) for _ in range(30)]
        ordered = sorted(monos, key=ring.mono_key)
        for low, high in zip(ordered, ordered[1:]):
            assert mono_compare(ring, low, high) <= 0


def test_ring_axioms_on_random_polynomials():
    rng = random.Random(9)
    for ring in (gf_ring(p=7), qq_ring()):
        zero, one = ring.zero(), ring.one()
        for _ in range(40):
            f, g, h = (random_poly(ring, rng) for _ in range(3))
            assert f + g == g + f
            assert (f + g) + h == f + (g + h)
            assert f * g == g * f
            assert (f * g) * h == f * (g * h)
            assert f * (g + h) == f * g + f * h
            assert f + zero == f
            assert f * one == f
            assert (f - f).is_zero()
            assert (f + (-f)).is_zero()


def test_monomial_key_cache_is_bounded():
    assert _grevlex_key.cache_info().maxsize == 1 << 16
