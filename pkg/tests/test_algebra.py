import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from househunt.algebra import (
    Kind,
    cyclotomic,
    cyclotomic_factorization,
    find_factor,
    graeffe_step,
    is_irreducible,
    is_root_of_unity_poly,
    minimal_gate,
    possible_factor_degrees,
)
from househunt.poly import IntPolynomial, compose_power, exact_quotient, parse_poly
from househunt.roots import house

X = sympy.symbols("x")


def sympy_irreducible(p: IntPolynomial) -> bool:
    _, factors = sympy.factor_list(sympy.Poly(list(p.descending()), X))
    return len(factors) == 1 and factors[0][1] == 1


def test_root_of_unity_examples():
    assert is_root_of_unity_poly(parse_poly("1 1 1"))
    assert not is_root_of_unity_poly(parse_poly("1 3 1"))
    assert is_root_of_unity_poly(parse_poly("1 0 0 0 1"))
    assert is_root_of_unity_poly(cyclotomic(7) * cyclotomic(12) * cyclotomic(1))
    assert not is_root_of_unity_poly(parse_poly("1 0 0 1 1", "half"))


def test_graeffe_of_cyclotomic_is_cyclotomic():
    # squaring the roots of Phi_9 gives the primitive 9th roots again
    assert graeffe_step(cyclotomic(9)) == cyclotomic(9)


def test_gate_examples():
    g = minimal_gate(parse_poly("1 1 1"))
    assert g.kind is Kind.ROOT_OF_UNITY and g.cyclotomic_indices == (3,)
    assert minimal_gate(parse_poly("1 0 0 0 1")).cyclotomic_indices == (8,)
    assert minimal_gate(parse_poly("1 0 1 1 0 1", "half")).kind is Kind.CANDIDATE
    assert minimal_gate(parse_poly("1 3 1") * parse_poly("1 3 1")).kind is Kind.REDUCIBLE


def test_irreducible_examples():
    assert is_irreducible(parse_poly("1 1 3 1 1"))
    assert is_irreducible(parse_poly("1 0 3 0 1"))


def test_product_witness_pair():
    a, b = parse_poly("1 3 1"), parse_poly("1 1 1")
    g = minimal_gate(a * b)
    assert g.kind is Kind.REDUCIBLE
    cofactor = exact_quotient(a * b, g.witness)
    assert {g.witness, cofactor} == {a, b}


def test_reconstruction_without_small_factors():
    r10 = parse_poly("1 0 1 1 0 1", "half")
    r4 = parse_poly("1 1 3", "half")
    g = minimal_gate(r10 * r4)
    assert g.kind is Kind.REDUCIBLE
    assert exact_quotient(r10 * r4, g.witness) is not None


@pytest.mark.parametrize("half", [
    "1 0 1 1 1 2 1 2 2 1",
    "1 0 1 1 0 1 0 0 0 0 0 0 1 0 1 1 0 1",
    "1 1 0 -1 0 0 0 0 0 -1 0 1",
])
def test_table_extremals_are_candidates(half):
    assert minimal_gate(parse_poly(half, "half")).kind is Kind.CANDIDATE


def test_composite_extremal_is_candidate():
    assert minimal_gate(compose_power(parse_poly("1 0 1 1 0 1", "half"), 3)).kind is Kind.CANDIDATE


def test_factor_degrees_sieve():
    assert possible_factor_degrees(parse_poly("1 0 0 1 1", "half")) == set()
    assert 2 in possible_factor_degrees(parse_poly("1 3 1") * parse_poly("1 1 1"))


def _factor_pair_oracle(p: IntPolynomial, bound: int = 6) -> bool:
    """True when p = f g for monic integer f, g of degrees 1..3 with small coefficients."""
    for d1 in (1, 2):
        for tail in itertools.product(range(-bound, bound + 1), repeat=d1):
            f = IntPolynomial(tuple(reversed((1,) + tail)))
            if exact_quotient(p, f) is not None:
                return True
    return False


def test_degree4_reciprocal_exhaustive():
    for a3, a2 in itertools.product(range(-2, 3), repeat=2):
        p = IntPolynomial.from_half((1, a3, a2))
        g = minimal_gate(p)
        on_circle = bool(np.all(np.abs(np.abs(np.roots(p.descending())) - 1) < 1e-6))
        if on_circle:
            expected = Kind.ROOT_OF_UNITY
        elif _factor_pair_oracle(p):
            expected = Kind.REDUCIBLE
        else:
            expected = Kind.CANDIDATE
        assert g.kind is expected, p


polys = st.lists(st.integers(-3, 3), min_size=2, max_size=10).map(lambda t: IntPolynomial.from_descending([1] + t))


@settings(max_examples=60, deadline=None)
@given(polys)
def test_gate_matches_sympy(p):
    if p.coeffs[0] == 0:
        return
    g = minimal_gate(p)
    if g.kind is Kind.REDUCIBLE:
        assert exact_quotient(p, g.witness) is not None
        assert 0 < g.witness.degree < p.degree
    if g.kind is Kind.CANDIDATE:
        assert sympy_irreducible(p)
    elif g.kind is Kind.REDUCIBLE:
        assert not sympy_irreducible(p)
    else:
        assert abs(house(p)[0] - 1) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=1, max_size=6))
def test_irreducibility_symmetries(tail):
    p = IntPolynomial.from_half([1] + tail)
    q = p.mirror()
    q = q if q.leading == 1 else -q
    assert is_irreducible(p) == is_irreducible(q) == is_irreducible(p.reverse())


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from([1, 2, 3, 4, 5, 6, 8, 10, 12]), min_size=1, max_size=4))
def test_cyclotomic_products(indices):
    p = IntPolynomial((1,))
    for n in indices:
        p = p * cyclotomic(n)
    assert is_root_of_unity_poly(p)
    assert sorted(cyclotomic_factorization(p)) == sorted(indices)


def test_find_factor_irreducible_none():
    assert find_factor(parse_poly("1 0 -1 -1")) is None
