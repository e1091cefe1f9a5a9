import random

import pytest
from hypothesis import given, settings, strategies as st

from polyrigid import BivariatePolynomial, InputError, IntPolynomial, difference_decomposition, evaluate
from polyrigid.poly import from_vector, parse_polynomial, to_vector

from instances import random_polynomial
from oracles import sympy_difference


def test_to_vector_examples():
    assert to_vector(IntPolynomial((1, 0, 2)), 3) == (1, 0, 2)
    assert to_vector(IntPolynomial(), 2) == (0, 0)
    with pytest.raises(InputError):
        to_vector(IntPolynomial((0, 0, 1)), 2)


def test_vector_round_trip():
    assert from_vector((3, 0, -1, 0)) == IntPolynomial((3, 0, -1))
    assert parse_polynomial("1, 2") == IntPolynomial((1, 2))
    assert parse_polynomial("") == IntPolynomial()
    with pytest.raises(InputError):
        parse_polynomial("1,x")


def test_zero_polynomial_has_degree_zero():
    assert IntPolynomial((0, 0)).degree == 0


def test_decomposition_examples():
    assert difference_decomposition(IntPolynomial((0, 1))) == BivariatePolynomial({(1, 1): 2})
    assert difference_decomposition(IntPolynomial((0, 0, 1))) == BivariatePolynomial({(2, 1): 3, (1, 2): 3})
    assert difference_decomposition(IntPolynomial((1,))).is_zero()
    assert difference_decomposition(IntPolynomial((1, 2))) == BivariatePolynomial({(1, 1): 4})


def test_evaluate_examples():
    assert evaluate(IntPolynomial((0, 1)), 5) == 25
    assert evaluate(IntPolynomial((1, 1)), 0) == 0
    assert evaluate(IntPolynomial((0, 0, 3)), -2) == -24


def test_evaluate_is_exact_for_big_arguments():
    n = 2**64
    assert evaluate(IntPolynomial((1, 1)), n) == n + n * n


def test_decomposition_matches_sympy_expansion():
    rng = random.Random(11)
    for _ in range(100):
        P = random_polynomial(rng)
        assert difference_decomposition(P).terms == sympy_difference(P.coeffs)


coeffs = st.lists(st.integers(-1000, 1000), max_size=6)
points = st.integers(-100, 100)


@settings(max_examples=500, deadline=None)
@given(coeffs, points, points)
def test_difference_laws(c, x, y):
    P = IntPolynomial(tuple(c))
    Q = difference_decomposition(P)
    assert evaluate(P, x + y) - evaluate(P, x) - evaluate(P, y) == Q(x, y)
    assert Q.divisible_by_xy()
    if P.degree >= 2:
        assert Q.x_degree == Q.y_degree == P.degree - 1
    else:
        assert Q.is_zero()
