from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gaudin_poisson.tensorops import (LegOperator, RowSpace, SingularSystem, embed_leg, flip, identity, inverse,
                                      matmul, partial_trace, partial_traces, permute_legs, rank, solve)

from conftest import small_rationals


def operators(n, legs):
    s = n ** legs
    return st.lists(st.lists(small_rationals, min_size=s, max_size=s), min_size=s, max_size=s).map(
        lambda rows: LegOperator(n, legs, tuple(tuple(r) for r in rows)))


def test_flip_small_cases():
    assert flip(1).entries == ((Fraction(1),),)
    P = flip(2)
    ones = {(r, c) for r in range(4) for c in range(4) if P.entries[r][c]}
    assert ones == {(0, 0), (1, 2), (2, 1), (3, 3)}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_flip_involutive(n):
    P = flip(n)
    assert P @ P == LegOperator.identity(n, 2)


def test_embed_examples():
    P = flip(2)
    assert embed_leg(P, 1, 2) == P
    assert embed_leg(P, 1, 3).apply_basis((0, 1, 1)) == {(1, 0, 1): 1}
    P12, P23 = embed_leg(P, 1, 3), embed_leg(P, 2, 3)
    assert P12 @ P23 @ P12 == P23 @ P12 @ P23
    with pytest.raises(ValueError):
        embed_leg(P, 3, 3)


@pytest.mark.parametrize("n", [2, 3])
def test_partial_trace_examples(n):
    P = flip(n)
    assert partial_trace(P, 2) == LegOperator.identity(n)
    assert partial_traces(P, [1, 2]).entries == ((Fraction(n),),)
    with pytest.raises(ValueError):
        partial_trace(P, 3)


@given(operators(2, 1))
def test_trace_of_identity_factor(A):
    I = LegOperator.identity(2)
    assert partial_trace(I.tensor(A), 1) == A.scale(2)
    assert partial_trace(A.tensor(I), 2) == A.scale(2)


@given(operators(2, 2), operators(2, 2))
def test_embed_respects_composition(A, B):
    assert embed_leg(A @ B, 2, 3) == embed_leg(A, 2, 3) @ embed_leg(B, 2, 3)


@given(operators(2, 2))
def test_full_partial_trace_is_trace(A):
    assert partial_traces(A, [1, 2]).entries[0][0] == A.trace()


@given(operators(2, 2))
def test_permute_legs_by_flip_conjugation(A):
    P = flip(2)
    assert permute_legs(A, [1, 0]) == P @ A @ P


@given(operators(2, 1))
def test_inverse_roundtrip(A):
    try:
        Ainv = inverse(A.entries)
    except SingularSystem:
        assert rank(A.entries) < 2
        return
    assert matmul(A.entries, Ainv) == identity(2)


def test_solve_and_rank():
    a = ((Fraction(2), Fraction(1)), (Fraction(1), Fraction(3)))
    x = solve(a, ((Fraction(3),), (Fraction(5),)))
    assert matmul(a, x) == ((Fraction(3),), (Fraction(5),))
    assert rank(((1, 2), (2, 4))) == 1


@given(st.lists(st.dictionaries(st.integers(0, 5), small_rationals, max_size=4), max_size=5))
def test_rowspace_contains_its_vectors(vectors):
    space = RowSpace(vectors)
    assert all(space.contains(v) for v in vectors)
    assert space.rank <= min(len(vectors), 6)
    assert space.same_span(RowSpace(reversed(vectors)))


def test_json_roundtrip():
    P = flip(2).scale(Fraction(1, 3))
    assert LegOperator.from_json(P.to_json()) == P
    assert P.to_json()["entries"][0][0] == "1/3"
