import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grassmann_isd.errors import InvalidArgument
from grassmann_isd.field import (GF2, PRIMITIVE_POLYNOMIALS, FqMatrix, GF2m, OpCounter, frobenius_power,
                                 is_irreducible, kernel_basis, mat_mul, rank, rref)


def slow_mul(a, b, m, poly):
    """Shift-and-add reference multiplication."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a >> m & 1:
            a ^= poly
    return out


def test_shipped_polynomials_are_irreducible():
    for m, poly in PRIMITIVE_POLYNOMIALS.items():
        assert poly.bit_length() == m + 1
        assert is_irreducible(poly), m


def test_reducible_polynomial_rejected():
    with pytest.raises(InvalidArgument):
        GF2m(2, 0b101)  # x^2 + 1 = (x + 1)^2


def test_gf4_alpha_squared():
    f = GF2m(2)
    assert int(f.mul(2, 2)) == 3  # alpha^2 = alpha + 1


@pytest.mark.parametrize("m", [1, 2, 3, 4, 8, 18, 24])
def test_mul_matches_reference(m):
    f = GF2m(m)
    rng = np.random.default_rng(m)
    a = rng.integers(0, f.order, size=200)
    b = rng.integers(0, f.order, size=200)
    got = f.mul(a, b)
    want = [slow_mul(int(x), int(y), m, f.poly) for x, y in zip(a, b)]
    assert list(map(int, got)) == want


@pytest.mark.parametrize("m", [2, 3, 5, 8])
def test_inverse_and_fermat(m):
    f = GF2m(m)
    for x in range(1, min(f.order, 300)):
        assert int(f.mul(x, f.inv(x))) == 1
        assert f.pow(x, f.order - 1) == 1


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        GF2m(3).inv(0)


def test_frobenius_is_additive_and_periodic():
    f = GF2m(5)
    rng = np.random.default_rng(0)
    a, b = rng.integers(0, f.order, size=(2, 50))
    for j in range(6):
        assert np.array_equal(frobenius_power(a ^ b, j, f), frobenius_power(a, j, f) ^ frobenius_power(b, j, f))
    assert np.array_equal(frobenius_power(a, 5, f), a)


def test_frobenius_negative_exponent_rejected():
    with pytest.raises(InvalidArgument):
        GF2m(3).frobenius_power(3, -1)


def test_out_of_range_entries_rejected():
    with pytest.raises(InvalidArgument):
        FqMatrix([[0, 4]], GF2m(2))
    with pytest.raises(InvalidArgument):
        FqMatrix([[2]])


def test_rref_small_counts():
    red, piv, r, ops = rref(FqMatrix([[1, 1], [1, 1]]))
    assert red.tolist() == [[1, 1], [0, 0]]
    assert piv == [0] and r == 1
    assert ops == OpCounter(row_swaps=0, row_additions=1, row_scalings=0)


def test_rref_identity_costs_nothing():
    red, piv, r, ops = rref(FqMatrix.identity(5))
    assert r == 5 and ops.total() == 0


def test_rref_respects_column_order():
    m = FqMatrix([[1, 0, 1], [0, 1, 1]])
    red, piv, r, _ = rref(m, column_order=[2, 1, 0])
    assert piv == [2, 1]
    assert red.data[:, 2].tolist() == [1, 0]


def test_rref_bad_column_order():
    with pytest.raises(InvalidArgument):
        rref(FqMatrix.identity(3), column_order=[0, 0, 1])


def brute_rank_gf2(rows):
    """Rank as log2 of the size of the row span."""
    rows = [tuple(r) for r in rows]
    span = {tuple([0] * len(rows[0]))}
    for r in rows:
        span |= {tuple(a ^ b for a, b in zip(s, r)) for s in span}
    return len(span).bit_length() - 1


@given(st.lists(st.lists(st.integers(0, 1), min_size=5, max_size=5), min_size=1, max_size=6))
@settings(max_examples=100, deadline=None)
def test_rank_matches_span_size(rows):
    assert rank(FqMatrix(rows)) == brute_rank_gf2(rows)


@given(st.integers(1, 6), st.integers(1, 8), st.integers(0, 2**32 - 1), st.sampled_from([1, 2, 3]))
@settings(max_examples=60, deadline=None)
def test_rref_properties(r, c, seed, m):
    f = GF2m(m)
    a = FqMatrix(np.random.default_rng(seed).integers(0, f.order, size=(r, c)), f)
    red, piv, rk, _ = rref(a)
    d = red.data
    # pivot columns form an identity block and rows below the rank are zero
    assert np.array_equal(d[:rk][:, piv], np.eye(rk, dtype=np.int64))
    assert not d[rk:].any()
    # row space is preserved
    assert rank(FqMatrix(np.vstack([a.data, d]), f)) == rk


@given(st.integers(1, 5), st.integers(2, 9), st.integers(0, 2**32 - 1), st.sampled_from([1, 2, 4]))
@settings(max_examples=60, deadline=None)
def test_kernel_basis(r, c, seed, m):
    f = GF2m(m)
    h = FqMatrix(np.random.default_rng(seed).integers(0, f.order, size=(r, c)), f)
    k = kernel_basis(h)
    assert k.rows == c - rank(h)
    if k.rows:
        assert mat_mul(h, k.T).is_zero()
        assert rank(k) == k.rows


def test_kernel_basis_exhaustive_gf2():
    h = FqMatrix([[1, 1, 0, 1], [0, 1, 1, 1]])
    k = kernel_basis(h)
    null = [v for v in itertools.product([0, 1], repeat=4) if not (h.data @ np.array(v) % 2).any()]
    assert 2 ** k.rows == len(null)


@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32 - 1), st.sampled_from([1, 3, 8]))
@settings(max_examples=40, deadline=None)
def test_text_round_trip(r, c, seed, m):
    f = GF2m(m)
    a = FqMatrix(np.random.default_rng(seed).integers(0, f.order, size=(r, c)), f)
    text = a.to_text()
    assert text.splitlines()[0] == f"{r} {c} {m}"
    b = FqMatrix.from_text(text)
    assert b == a and b.to_text() == text


def test_from_text_malformed():
    with pytest.raises(InvalidArgument):
        FqMatrix.from_text("2 2 1\n1 0\n")
    with pytest.raises(InvalidArgument):
        FqMatrix.from_text("1 2 1\n1 z\n")


def test_mat_mul_shape_check():
    with pytest.raises(InvalidArgument):
        mat_mul(FqMatrix.identity(2), FqMatrix.identity(3))


def test_matrix_is_read_only():
    a = FqMatrix.identity(2)
    with pytest.raises(ValueError):
        a.data[0, 0] = 0


def test_gf2_singleton():
    assert GF2 == GF2m(1) and hash(GF2) == hash(GF2m(1))
