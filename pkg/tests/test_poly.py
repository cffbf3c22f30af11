from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from househunt.poly import (
    IntPolynomial,
    PolynomialError,
    compose_power,
    divmod_exact,
    evaluate_exact,
    exact_quotient,
    is_antireciprocal,
    is_primitive,
    is_reciprocal,
    is_squarefree,
    parse_poly,
    poly_gcd,
    primitivity_decompose,
    sign_at,
    squarefree_decomposition,
)


def desc(p):
    return list(p.descending())


def test_parse_half_and_full():
    assert desc(parse_poly("1 3", "half")) == [1, 3, 1]
    assert desc(parse_poly("1 1 3", "half")) == [1, 1, 3, 1, 1]
    assert desc(parse_poly("1 1 0 -1")) == [1, 1, 0, -1]
    assert parse_poly("1 0 0 1 1", "half").degree == 8


@pytest.mark.parametrize("text,enc", [("", "full"), ("0 1", "full"), ("2 1", "half"), ("1 x", "full"), ("1", "odd")])
def test_parse_rejects(text, enc):
    with pytest.raises(PolynomialError):
        parse_poly(text, enc)


def test_reciprocity():
    assert is_reciprocal(parse_poly("1 1 3", "half"))
    assert not is_reciprocal(parse_poly("1 1 0 -1"))
    assert is_reciprocal(parse_poly("1 1"))
    assert is_antireciprocal(parse_poly("1 0 -1"))


def test_compose_power():
    p = parse_poly("1 3 1")
    assert desc(compose_power(p, 2)) == [1, 0, 3, 0, 1]
    assert desc(compose_power(parse_poly("1 1 0 -1"), 3)) == [1, 0, 0, 1, 0, 0, 0, 0, 0, -1]
    assert compose_power(p, 1) == p
    with pytest.raises(PolynomialError):
        compose_power(p, 0)


def test_primitivity():
    q, k = primitivity_decompose(parse_poly("1 0 3 0 1"))
    assert k == 2 and desc(q) == [1, 3, 1]
    assert primitivity_decompose(parse_poly("1 0 0 0 0 0 -2"))[1] == 6
    assert is_primitive(parse_poly("1 1 3", "half"))
    assert not is_primitive(parse_poly("1 0 3", "half"))


def test_evaluate_exact():
    p = parse_poly("1 -2")
    assert evaluate_exact(p, 3, 2) == -1
    assert sign_at(p, Fraction(3, 2)) == -1
    assert sign_at(p, 2) == 0
    with pytest.raises(PolynomialError):
        evaluate_exact(p, 1, 0)


def test_division():
    p = parse_poly("1 4 5 4 1")
    q, r = divmod_exact(p, parse_poly("1 1 1"))
    assert r is None and desc(q) == [1, 3, 1]
    assert exact_quotient(p, parse_poly("1 0 1")) is None
    with pytest.raises(PolynomialError):
        divmod_exact(parse_poly("1 1"), parse_poly("1 0 1"))


def test_squarefree():
    assert is_squarefree(parse_poly("1 3 1"))
    sq = parse_poly("1 1 1") * parse_poly("1 1 1") * parse_poly("1 -2")
    assert not is_squarefree(sq)
    assert desc(poly_gcd(sq, sq.derivative())) == [1, 1, 1]
    parts = {tuple(desc(f)): m for f, m in squarefree_decomposition(sq)}
    assert parts == {(1, -2): 1, (1, 1, 1): 2}


def test_str():
    assert str(parse_poly("1 0 -1 -1")) == "x^3 - x - 1"
    assert str(parse_poly("2 3 1")) == "2*x^2 + 3*x + 1"


small = st.lists(st.integers(-3, 3), min_size=2, max_size=8).filter(lambda c: c[0] != 0)


@given(small, st.integers(1, 4))
def test_compose_then_decompose(coeffs, k):
    p = IntPolynomial.from_descending(coeffs)
    q, kk = primitivity_decompose(compose_power(p, k))
    assert kk % k == 0
    assert compose_power(q, kk) == compose_power(p, k)


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=6))
def test_half_roundtrip(tail):
    p = IntPolynomial.from_half([1] + tail)
    assert is_reciprocal(p)
    assert p.half() == tuple([1] + tail)
    assert parse_poly(p.format("half"), "half") == p


@given(small, st.integers(-5, 5), st.integers(1, 5))
def test_exact_sign_matches_fraction(coeffs, num, den):
    p = IntPolynomial.from_descending(coeffs)
    x = Fraction(num, den)
    value = sum(Fraction(c) * x**k for k, c in enumerate(p.coeffs))
    assert sign_at(p, x) == (value > 0) - (value < 0)


@given(small, small)
def test_product_division_roundtrip(a, b):
    p, q = IntPolynomial.from_descending(a), IntPolynomial.from_descending([1] + b[1:])
    assert exact_quotient(p * q, q) == p
