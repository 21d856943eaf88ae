from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from maxoutpoly.rational import (
    Q,
    RationalParseError,
    dot,
    fmt,
    in_span,
    mat,
    nullspace,
    parse_vec,
    rank,
    rref,
    unit,
)
from oracles import frank
from strategies import matrices, rationals


def test_parse_forms():
    assert Q("3/6") == Q(1) / 2
    assert Q("-7") == -7
    assert Q(Fraction(4, 10)) == Q(2) / 5
    assert fmt(Q("10/4")) == "5/2"
    assert fmt(Q("-8/4")) == "-2"


@pytest.mark.parametrize("bad", [0.5, True, "1/0", "x", "1.5", None, [1]])
def test_parse_rejects(bad):
    with pytest.raises(RationalParseError):
        Q(bad)


def test_parse_vec_rejects_scalar():
    with pytest.raises(RationalParseError):
        parse_vec("1")


def test_canonical_lowest_terms():
    x = Q(6) / Q(-4)
    assert (x.numerator, x.denominator) == (-3, 2)


def test_matrix_rectangular():
    with pytest.raises(ValueError):
        mat([[1, 2], [3]])


def test_rank_examples():
    assert rank([unit(3, i) for i in range(3)]) == 3
    assert rank([[0, 0, 0, 0], [0, 0, 0, 0]]) == 0
    assert rank([[1, 2], [2, 4], [3, 6]]) == 1


def test_dot_dimension_check():
    with pytest.raises(ValueError):
        dot((Q(1),), (Q(1), Q(2)))


@given(matrices())
def test_rank_matches_gaussian_oracle(data):
    _, m = data
    assert rank(m) == frank([[Fraction(str(x)) for x in row] for row in m])


@given(matrices(rows=(1, 5)))
def test_rank_agrees_with_rref(data):
    _, m = data
    assert rank(m) == len(rref(m)[1])


@given(matrices(rows=(0, 4), cols=(1, 5)))
def test_nullspace_is_kernel_of_right_size(data):
    c, m = data
    basis = nullspace(m, c)
    assert len(basis) == c - rank(m)
    assert all(dot(row, v) == 0 for row in m for v in basis)
    assert rank(basis) == len(basis)


@given(matrices(rows=(1, 4)), st.lists(rationals, min_size=4, max_size=4))
def test_in_span_of_combination(data, coeffs):
    c, m = data
    v = tuple(sum((Q(k) * row[j] for k, row in zip(coeffs, m)), Q(0)) for j in range(c))
    assert in_span(v, m)
