from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from gaudin_poisson.scalar import CoeffSpec, alpha_coeff, as_rational, beta_closed_form, beta_coeff, rational_str

orders = st.integers(0, 10)
rs = st.integers(1, 4)


@pytest.mark.parametrize("args, expected", [
    ((1, 0, 0), Fraction(1)),
    ((1, 1, 1), Fraction(1, 6)),
    ((2, 0, 0), Fraction(1, 6)),
    ((2, 1, 0), Fraction(1, 12)),
])
def test_alpha_examples(args, expected):
    assert alpha_coeff(*args) == expected


@pytest.mark.parametrize("args, expected", [
    ((1, 1, 2, 3), Fraction(1, 3360)),
    ((1, 0, 0, 0), Fraction(1, 2)),
    ((2, 0, 0, 0), Fraction(1, 120)),
])
def test_beta_examples(args, expected):
    assert beta_coeff(*args) == expected


def test_alpha_matches_frozen_oracle(frozen):
    for key, value in frozen["alpha"].items():
        r, k, l = map(int, key.split(","))
        assert alpha_coeff(r, k, l) == Fraction(value), key


def test_beta_matches_frozen_oracle(frozen):
    for key, value in frozen["beta"].items():
        r, k, l, m = map(int, key.split(","))
        assert beta_coeff(r, k, l, m) == Fraction(value), key


@given(rs, orders, orders)
def test_alpha_symmetric(r, k, l):
    assert alpha_coeff(r, k, l) == alpha_coeff(r, l, k)


@given(orders, orders)
def test_alpha_r1_is_beta_function(k, l):
    assert alpha_coeff(1, k, l) == Fraction(factorial(k) * factorial(l), factorial(k + l + 1))


@given(rs, st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_beta_cyclic_and_closed_form(r, k, l, m):
    b = beta_coeff(r, k, l, m)
    assert b == beta_coeff(r, l, m, k) == beta_coeff(r, m, k, l)
    assert b == beta_closed_form(r, k, l, m)


@pytest.mark.parametrize("k", range(21))
def test_order_two_scalar_identity(k):
    assert alpha_coeff(2, k, 0) / factorial(k) == Fraction(1, factorial(k + 2)) - Fraction(2, factorial(k + 3))


@given(rs, orders, orders)
def test_lowest_terms(r, k, l):
    a = alpha_coeff(r, k, l)
    assert a.denominator > 0 and a == Fraction(a.numerator, a.denominator)


def test_coeff_spec_validation():
    assert CoeffSpec(2).alpha(1, 0) == Fraction(1, 12)
    assert CoeffSpec(1).beta(1, 2, 3) == Fraction(1, 3360)
    with pytest.raises(ValueError):
        CoeffSpec(0)
    with pytest.raises(ValueError):
        alpha_coeff(1, -1, 0)


def test_rational_strings():
    assert rational_str(Fraction(6, 4)) == "3/2"
    assert rational_str(Fraction(4, 2)) == "2"
    assert as_rational(" -3/9 ") == Fraction(-1, 3)
    with pytest.raises(TypeError):
        as_rational(0.5)
