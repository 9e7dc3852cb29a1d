"""Semiring scalars, matrices, powers, star, ordering, serialization."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropigait import (
    E,
    EPSILON,
    DimensionMismatch,
    MaxPlusMatrix,
    NegativePowerOfEpsilon,
    NotSquare,
    ParseError,
    PositiveCircuit,
    is_epsilon,
    is_nilpotent,
    kleene_star,
    mat_oplus,
    mat_otimes,
    mat_power,
    mpow_scalar,
    oplus,
    otimes,
    overcomes,
    solve_affine,
)
from tropigait.errors import BadExponent

EPS = EPSILON

# entries either epsilon or small integers; integer values keep comparisons exact
finite_entries = st.integers(min_value=-10, max_value=10).map(float)
entries = st.one_of(st.just(EPS), finite_entries)
# circuits over non-positive weights cannot be positive, so the star exists
starrable_entries = st.one_of(
    st.just(EPS), st.integers(min_value=-9, max_value=0).map(float)
)
dims = st.integers(min_value=1, max_value=8)


def matrix_st(rows, cols, entry=entries):
    return st.lists(
        st.lists(entry, min_size=cols, max_size=cols),
        min_size=rows,
        max_size=rows,
    ).map(MaxPlusMatrix)


@st.composite
def square_triple(draw, entry=entries):
    n = draw(dims)
    return tuple(draw(matrix_st(n, n, entry)) for _ in range(3))


@st.composite
def square_matrix(draw, entry=entries):
    n = draw(dims)
    return draw(matrix_st(n, n, entry))


def M(rows):
    return MaxPlusMatrix(rows)


# --- scalar operations ---


def test_oplus_epsilon_neutral():
    assert oplus(3.0, EPS) == 3.0
    assert oplus(2.0, 5.0) == 5.0
    assert is_epsilon(oplus(EPS, EPS))


def test_otimes_epsilon_absorbing():
    assert otimes(2.0, 3.0) == 5.0
    assert is_epsilon(otimes(EPS, 7.0))
    assert otimes(E, 11.0) == 11.0
    assert otimes(-4.0, E) == -4.0


def test_mpow_scalar():
    assert mpow_scalar(3.0, 2) == 6.0
    assert mpow_scalar(EPS, 0) == 0.0
    assert mpow_scalar(5.0, -1) == -5.0
    assert is_epsilon(mpow_scalar(EPS, 3))


def test_mpow_scalar_fractional_exponent():
    assert mpow_scalar(4.0, 0.5) == 2.0


def test_mpow_scalar_negative_power_of_epsilon():
    with pytest.raises(NegativePowerOfEpsilon):
        mpow_scalar(EPS, -1)


# --- matrix constructors ---


def test_basis_constructors():
    z = MaxPlusMatrix.zeros(2, 3)
    assert np.all(np.isneginf(z.asarray()))
    i = MaxPlusMatrix.identity(3)
    assert i[0, 0] == 0.0 and is_epsilon(i[0, 1])
    e = MaxPlusMatrix.ones(2, 2)
    assert np.all(e.asarray() == 0.0)


def test_constructor_rejects_nan_and_posinf():
    with pytest.raises(Exception):
        MaxPlusMatrix([[float("nan")]])
    with pytest.raises(Exception):
        MaxPlusMatrix([[float("inf")]])


def test_matrix_is_immutable():
    a = M([[1.0, 2.0]])
    with pytest.raises((ValueError, TypeError)):
        a.asarray()[0, 0] = 9.0


# --- matrix oplus / otimes ---


def test_mat_oplus_zero_neutral():
    a = M([[1.0, EPS], [EPS, 2.0]])
    assert mat_oplus(a, MaxPlusMatrix.zeros(2, 2)) == a
    assert mat_oplus(a, a) == a


def test_mat_oplus_elementwise():
    a = M([[1.0, EPS], [EPS, 2.0]])
    b = M([[0.0, 3.0], [EPS, EPS]])
    assert mat_oplus(a, b) == M([[1.0, 3.0], [EPS, 2.0]])


def test_mat_oplus_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        mat_oplus(M([[1.0]]), M([[1.0, 2.0]]))


def test_mat_otimes_identity_and_zero():
    a = M([[1.0, EPS], [4.0, 2.0]])
    assert mat_otimes(MaxPlusMatrix.identity(2), a) == a
    assert mat_otimes(a, MaxPlusMatrix.identity(2)) == a
    z = MaxPlusMatrix.zeros(2, 2)
    assert mat_otimes(z, a) == z


def test_mat_otimes_two_cycle():
    a = M([[EPS, 3.0], [2.0, EPS]])
    assert mat_otimes(a, a) == M([[5.0, EPS], [EPS, 5.0]])


def test_mat_otimes_scalar_broadcast():
    a = M([[1.0, EPS], [4.0, 2.0]])
    assert mat_otimes(3.0, a) == M([[4.0, EPS], [7.0, 5.0]])
    assert mat_otimes(a, 3.0) == mat_otimes(3.0, a)


def test_mat_otimes_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        mat_otimes(M([[1.0, 2.0]]), M([[1.0, 2.0]]))


def test_rectangular_product_shape():
    a = MaxPlusMatrix.ones(2, 3)
    b = MaxPlusMatrix.ones(3, 4)
    assert mat_otimes(a, b).shape == (2, 4)


# --- powers ---


def test_mat_power_zero_is_identity():
    a = M([[EPS, 3.0], [2.0, EPS]])
    assert mat_power(a, 0) == MaxPlusMatrix.identity(2)


def test_mat_power_identity_fixed_point():
    i = MaxPlusMatrix.identity(3)
    assert mat_power(i, 7) == i


def test_mat_power_nilpotent():
    a = M([[EPS, EPS], [1.0, EPS]])
    assert mat_power(a, 2) == MaxPlusMatrix.zeros(2, 2)


def test_mat_power_requires_square():
    with pytest.raises(NotSquare):
        mat_power(MaxPlusMatrix.ones(2, 3), 2)


def test_mat_power_rejects_bad_exponent():
    a = MaxPlusMatrix.identity(2)
    with pytest.raises(BadExponent):
        mat_power(a, -1)
    with pytest.raises(BadExponent):
        mat_power(a, 1.5)


# --- kleene star ---


def test_star_of_zero_matrix():
    assert kleene_star(MaxPlusMatrix.zeros(2, 2)) == MaxPlusMatrix.identity(2)


def test_star_lower_triangular():
    a = M([[EPS, EPS], [1.0, EPS]])
    assert kleene_star(a) == M([[0.0, EPS], [1.0, 0.0]])


def test_star_positive_self_loop_diverges():
    with pytest.raises(PositiveCircuit):
        kleene_star(M([[1.0]]))


def test_star_positive_two_cycle_diverges():
    with pytest.raises(PositiveCircuit):
        kleene_star(M([[EPS, 3.0], [-2.0, EPS]]))


def test_star_zero_weight_cycle_converges():
    a = M([[EPS, 2.0], [-2.0, EPS]])
    assert kleene_star(a) == M([[0.0, 2.0], [-2.0, 0.0]])


# --- ordering, nilpotency, solve ---


def test_overcomes_basics():
    a = M([[1.0, EPS], [4.0, 2.0]])
    assert overcomes(a, MaxPlusMatrix.zeros(2, 2))
    assert overcomes(a, a)
    assert not overcomes(MaxPlusMatrix.zeros(2, 2), a)


def test_is_nilpotent_zero_and_identity():
    assert is_nilpotent(MaxPlusMatrix.zeros(3, 3)) == (True, 1)
    assert is_nilpotent(MaxPlusMatrix.identity(3)) == (False, None)


def test_is_nilpotent_strict_lower_triangular():
    a = M([[EPS, EPS, EPS], [1.0, EPS, EPS], [5.0, 1.0, EPS]])
    assert is_nilpotent(a) == (True, 3)


def test_solve_affine_scalar():
    x = solve_affine(M([[EPS]]), M([[5.0]]))
    assert x == M([[5.0]])


def test_solve_affine_two_by_two():
    a = M([[EPS, EPS], [1.0, EPS]])
    b = M([[0.0], [0.0]])
    assert solve_affine(a, b) == M([[0.0], [1.0]])


def test_solve_affine_propagates_positive_circuit():
    with pytest.raises(PositiveCircuit):
        solve_affine(M([[1.0]]), M([[0.0]]))


# --- serialization ---


def test_json_round_trip_with_epsilon():
    a = M([[1.0, EPS], [-2.5, 0.0]])
    text = a.to_json()
    payload = json.loads(text)
    assert payload["rows"] == 2 and payload["cols"] == 2
    assert "-inf" in payload["entries"]
    assert MaxPlusMatrix.from_json(text) == a


def test_json_integer_entries_stay_numbers():
    payload = json.loads(M([[3.0]]).to_json())
    assert payload["entries"] == [3]


def test_from_json_rejects_garbage():
    with pytest.raises(ParseError):
        MaxPlusMatrix.from_json("not json")
    with pytest.raises(ParseError):
        MaxPlusMatrix.from_json('{"rows": 1, "cols": 2, "entries": [1]}')
    with pytest.raises(ParseError):
        MaxPlusMatrix.from_json('{"rows": 1, "cols": 1, "entries": ["up"]}')


def test_pretty_marks_epsilon():
    text = M([[EPS, 3.0]]).pretty()
    assert "." in text and "3" in text


# --- semiring laws ---


@given(square_triple())
def test_oplus_associative_commutative_idempotent(abc):
    a, b, c = abc
    assert mat_oplus(mat_oplus(a, b), c) == mat_oplus(a, mat_oplus(b, c))
    assert mat_oplus(a, b) == mat_oplus(b, a)
    assert mat_oplus(a, a) == a


@given(square_triple())
def test_otimes_associative(abc):
    a, b, c = abc
    assert mat_otimes(mat_otimes(a, b), c) == mat_otimes(a, mat_otimes(b, c))


@given(square_matrix())
def test_otimes_identity_and_absorbing(a):
    n = a.rows
    i = MaxPlusMatrix.identity(n)
    z = MaxPlusMatrix.zeros(n, n)
    assert mat_otimes(i, a) == a
    assert mat_otimes(a, i) == a
    assert mat_otimes(z, a) == z
    assert mat_otimes(a, z) == z


@given(square_triple())
def test_otimes_distributes_over_oplus(abc):
    a, b, c = abc
    left = mat_otimes(a, mat_oplus(b, c))
    assert left == mat_oplus(mat_otimes(a, b), mat_otimes(a, c))
    right = mat_otimes(mat_oplus(b, c), a)
    assert right == mat_oplus(mat_otimes(b, a), mat_otimes(c, a))


@given(square_matrix(), st.integers(0, 6), st.integers(0, 6))
def test_power_additivity(a, p, q):
    assert mat_power(a, p + q) == mat_otimes(mat_power(a, p), mat_power(a, q))


# --- star and solve properties ---


@given(square_matrix(starrable_entries))
def test_star_idempotent_and_fixed_point(a):
    s = kleene_star(a)
    assert mat_otimes(s, s) == s
    i = MaxPlusMatrix.identity(a.rows)
    assert s == mat_oplus(i, mat_otimes(a, s))


@given(square_matrix(starrable_entries), st.data())
def test_solve_affine_fixed_point(a, data):
    b = data.draw(matrix_st(a.rows, 1))
    x = solve_affine(a, b)
    assert x == mat_oplus(mat_otimes(a, x), b)


@settings(max_examples=40)
@given(square_matrix())
def test_nilpotent_star_is_partial_sum(a):
    flag, p0 = is_nilpotent(a)
    if not flag:
        return
    total = MaxPlusMatrix.identity(a.rows)
    for p in range(1, p0):
        total = mat_oplus(total, mat_power(a, p))
    assert kleene_star(a) == total


@given(square_matrix())
def test_overcomes_matches_oplus_identity(a):
    b = MaxPlusMatrix(np.minimum(a.asarray(), 0.0))
    assert overcomes(a, b) == (mat_oplus(a, b) == a)
