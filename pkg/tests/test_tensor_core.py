import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from defectchain.tensor_core import (TensorOperator, TensorSpace, embed,
                                     embed_two_site, frobenius, kron,
                                     partial_transpose, permutation_operator)


def op(dims, entries):
    return TensorOperator(TensorSpace(tuple(dims)), np.asarray(entries, dtype=complex))


def random_op(rng, d):
    return op([d], rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))


SZ = np.diag([1.0, -1.0]).astype(complex)


def test_kron_identities():
    i2 = TensorOperator.identity(TensorSpace((2,)))
    i3 = TensorOperator.identity(TensorSpace((3,)))
    out = kron(i2, i3)
    assert out.space.factor_dims == (2, 3)
    np.testing.assert_allclose(out.entries, np.eye(6))


def test_kron_sigma_z():
    sz = op([2], SZ)
    out = kron(sz, sz)
    np.testing.assert_allclose(out.entries, np.diag([1, -1, -1, 1]))


@given(st.integers(0, 2 ** 31 - 1))
@settings(max_examples=25, deadline=None)
def test_kron_mixed_product(seed):
    rng = np.random.default_rng(seed)
    a, b, c, d = (random_op(rng, 2) for _ in range(4))
    lhs = kron(a, b) @ kron(c, d)
    rhs = kron(a @ c, b @ d)
    np.testing.assert_allclose(lhs.entries, rhs.entries, atol=1e-12)


def test_kron_associativity_bookkeeping():
    rng = np.random.default_rng(3)
    a, b, c = random_op(rng, 2), random_op(rng, 3), random_op(rng, 2)
    left = kron(kron(a, b), c)
    right = kron(a, kron(b, c))
    assert left.space.factor_dims == right.space.factor_dims == (2, 3, 2)
    np.testing.assert_allclose(left.entries, right.entries, atol=1e-13)


def test_permutation_matrix_d2():
    p = permutation_operator(2)
    expected = np.zeros((4, 4))
    for r, c in [(0, 0), (1, 2), (2, 1), (3, 3)]:
        expected[r, c] = 1.0
    np.testing.assert_allclose(p.entries, expected)


@pytest.mark.parametrize("d", [2, 3])
def test_permutation_involution(d):
    p = permutation_operator(d)
    np.testing.assert_allclose((p @ p).entries, np.eye(d * d), atol=1e-14)


def test_permutation_swaps_factors():
    rng = np.random.default_rng(11)
    a, b = random_op(rng, 2), random_op(rng, 2)
    p = permutation_operator(2)
    lhs = p @ kron(a, b) @ p
    np.testing.assert_allclose(lhs.entries, kron(b, a).entries, atol=1e-12)


def test_permutation_rejects_small():
    with pytest.raises(ValueError):
        permutation_operator(1)


def test_partial_transpose_identity_and_involution():
    space = TensorSpace((2, 3))
    ident = TensorOperator.identity(space)
    np.testing.assert_allclose(partial_transpose(ident, 1).entries, np.eye(6))
    rng = np.random.default_rng(5)
    m = op([2, 3], rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6)))
    twice = partial_transpose(partial_transpose(m, 0), 0)
    np.testing.assert_allclose(twice.entries, m.entries)


def test_partial_transpose_on_product():
    rng = np.random.default_rng(6)
    a, b = random_op(rng, 2), random_op(rng, 3)
    m = kron(a, b)
    expected = kron(op([2], a.entries.T), b)
    np.testing.assert_allclose(partial_transpose(m, 0).entries, expected.entries)


@given(st.integers(0, 2 ** 31 - 1))
@settings(max_examples=25, deadline=None)
def test_partial_transpose_preserves_frobenius(seed):
    rng = np.random.default_rng(seed)
    m = op([2, 2], rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    assert frobenius(partial_transpose(m, 1)) == pytest.approx(frobenius(m), rel=1e-12)


def test_partial_transpose_bad_index():
    m = TensorOperator.identity(TensorSpace((2, 2)))
    with pytest.raises(IndexError):
        partial_transpose(m, 2)


def test_embed_identity_and_kron_ordering():
    space = TensorSpace((2, 3, 2))
    ident = embed(np.eye(3), 1, space)
    np.testing.assert_allclose(ident.entries, np.eye(12))
    sz0 = embed(SZ, 0, space)
    sz2 = embed(SZ, 2, space)
    direct = kron(kron(op([2], SZ), TensorOperator.identity(TensorSpace((3,)))),
                  op([2], SZ))
    np.testing.assert_allclose((sz0 @ sz2).entries, direct.entries)


def test_embed_distinct_sites_commute():
    rng = np.random.default_rng(8)
    space = TensorSpace((2, 2, 3))
    a = embed(rng.standard_normal((2, 2)), 0, space)
    b = embed(rng.standard_normal((3, 3)), 2, space)
    np.testing.assert_allclose((a @ b).entries, (b @ a).entries, atol=1e-13)


def test_embed_dimension_mismatch():
    with pytest.raises(ValueError):
        embed(np.eye(3), 0, TensorSpace((2, 2)))


def test_embed_two_site_matches_kron():
    rng = np.random.default_rng(9)
    space = TensorSpace((2, 3, 2))
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    built = embed_two_site(m, (0, 2), space)
    # oracle: contract by hand with an explicit reordering
    t = m.reshape(2, 2, 2, 2)
    oracle = np.einsum("acbd,ef->aecbfd", t, np.eye(3)).reshape(12, 12)
    np.testing.assert_allclose(built.entries, oracle)


def test_operator_rejects_nan():
    space = TensorSpace((2,))
    bad = np.array([[np.nan, 0], [0, 1]], dtype=complex)
    with pytest.raises(ValueError):
        TensorOperator(space, bad)


def test_space_mismatch_rejected():
    a = TensorOperator.identity(TensorSpace((2, 2)))
    b = TensorOperator.identity(TensorSpace((4,)))
    with pytest.raises(ValueError):
        a @ b
