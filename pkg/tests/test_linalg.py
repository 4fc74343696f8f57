import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matnormtest.errors import NotPositiveDefinite
from matnormtest.linalg import SpdMatrix, cholesky, kron, logdet_spd, spd_solve, unvec, vec

from conftest import random_spd_array


def kron_bruteforce(A, B):
    m, n = A.shape
    p, q = B.shape
    out = np.zeros((m * p, n * q))
    for i in range(m):
        for j in range(n):
            for k in range(p):
                for l in range(q):
                    out[i * p + k, j * q + l] = A[i, j] * B[k, l]
    return out


class TestVec:
    def test_two_by_two(self):
        assert vec([[1, 2], [3, 4]]).tolist() == [1, 3, 2, 4]

    def test_scalar(self):
        assert vec([[5]]).tolist() == [5]

    def test_three_by_two(self):
        X = np.arange(1, 7).reshape(3, 2)
        assert vec(X).tolist() == [1, 3, 5, 2, 4, 6]

    def test_unvec_inverts(self, rng):
        X = rng.standard_normal((3, 5))
        assert np.array_equal(unvec(vec(X), 3, 5), X)


class TestKron:
    def test_identity_left(self, rng):
        B = rng.standard_normal((2, 2))
        K = kron(np.eye(2), B)
        expected = np.zeros((4, 4))
        expected[:2, :2] = B
        expected[2:, 2:] = B
        assert np.array_equal(K, expected)

    def test_scalar_left(self, rng):
        B = rng.standard_normal((3, 2))
        assert np.allclose(kron([[2.5]], B), 2.5 * B, rtol=0, atol=0)

    def test_block_definition(self):
        A = np.array([[1.0, 2.0], [3.0, 4.0]])
        B = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert np.array_equal(kron(A, B), kron_bruteforce(A, B))
        assert kron(A, B)[0].tolist() == [0, 1, 0, 2]

    def test_rectangular_against_bruteforce(self, rng):
        A = rng.standard_normal((2, 3))
        B = rng.standard_normal((4, 1))
        assert np.allclose(kron(A, B), kron_bruteforce(A, B), rtol=0, atol=1e-15)


dims = st.integers(min_value=2, max_value=4)


@settings(max_examples=60, deadline=None)
@given(m=dims, n=dims, p=dims, q=dims, seed=st.integers(0, 2**32 - 1))
def test_vec_kron_identity(m, n, p, q, seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n))
    C = rng.standard_normal((n, q))
    B = rng.standard_normal((p, q))
    lhs = vec(A @ C @ B.T)
    rhs = kron(B, A) @ vec(C)
    assert np.allclose(lhs, rhs, rtol=0, atol=1e-10 * (1 + np.abs(lhs).max()))


@settings(max_examples=40, deadline=None)
@given(a=st.integers(1, 5), b=st.integers(1, 5), seed=st.integers(0, 2**32 - 1))
def test_kron_of_spd_is_spd(a, b, seed):
    rng = np.random.default_rng(seed)
    S = SpdMatrix(kron(random_spd_array(rng, a), random_spd_array(rng, b)))
    assert S.dim == a * b


class TestCholesky:
    def test_identity(self):
        assert np.array_equal(cholesky(np.eye(3)), np.eye(3))

    def test_two_by_two(self):
        L = cholesky([[4.0, 2.0], [2.0, 3.0]])
        assert np.allclose(L, [[2.0, 0.0], [1.0, math.sqrt(2.0)]], rtol=0, atol=1e-15)
        assert np.allclose(L @ L.T, [[4, 2], [2, 3]], rtol=0, atol=1e-14)

    def test_indefinite(self):
        with pytest.raises(NotPositiveDefinite):
            cholesky([[1.0, 2.0], [2.0, 1.0]])

    def test_zero_matrix(self):
        with pytest.raises(NotPositiveDefinite):
            cholesky(np.zeros((2, 2)))

    def test_negligible_pivot(self):
        with pytest.raises(NotPositiveDefinite):
            cholesky(np.diag([1.0, 1e-14]))

    def test_asymmetric(self):
        with pytest.raises(NotPositiveDefinite):
            cholesky([[1.0, 0.5], [0.4, 1.0]])

    @settings(max_examples=50, deadline=None)
    @given(d=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
    def test_roundtrip(self, d, seed):
        S = random_spd_array(np.random.default_rng(seed), d)
        L = cholesky(S)
        assert np.array_equal(L, np.tril(L))
        assert np.all(np.diag(L) > 0)
        assert np.linalg.norm(L @ L.T - S) <= 1e-10 * np.linalg.norm(S)


class TestSolveLogdet:
    def test_identity(self):
        assert np.allclose(spd_solve(SpdMatrix(np.eye(2)), [1.0, 2.0]), [1.0, 2.0])

    def test_diagonal(self):
        assert np.allclose(spd_solve(SpdMatrix(np.diag([2.0, 4.0])), [2.0, 4.0]), [1.0, 1.0], rtol=0, atol=1e-15)

    def test_two_by_two(self):
        x = spd_solve(SpdMatrix([[4.0, 2.0], [2.0, 3.0]]), [1.0, 0.0])
        assert np.allclose(x, [0.375, -0.25], rtol=0, atol=1e-15)

    def test_residual(self, rng):
        S = SpdMatrix(random_spd_array(rng, 6))
        b = rng.standard_normal(6)
        x = spd_solve(S, b)
        assert np.linalg.norm(S.matrix @ x - b) <= 1e-9 * np.linalg.norm(b)

    def test_logdet_identity(self):
        assert logdet_spd(SpdMatrix(np.eye(4))) == 0.0

    def test_logdet_diag(self):
        assert logdet_spd(SpdMatrix(np.diag([2.0, 8.0]))) == pytest.approx(math.log(16.0), abs=1e-14)

    def test_logdet_two_by_two(self):
        assert logdet_spd(SpdMatrix([[4.0, 2.0], [2.0, 3.0]])) == pytest.approx(math.log(8.0), abs=1e-14)


def test_spd_matrix_is_read_only():
    S = SpdMatrix(np.eye(2))
    with pytest.raises(ValueError):
        S.matrix[0, 0] = 3.0


def test_scaled_keeps_factor_consistent(rng):
    S = SpdMatrix(random_spd_array(rng, 3)).scaled(2.5)
    assert np.allclose(S.chol @ S.chol.T, S.matrix, rtol=1e-14, atol=0)
