import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matnormtest.distributions import MatrixDataset, MatrixNormalParams, matnorm_logpdf, sample_matrix_normal
from matnormtest.errors import MaxIterationsExceeded, SampleTooSmall, SingularCovariance, SingularUpdate
from matnormtest.estimation import estimate_mvn, flip_flop_mle, normalize_scale
from matnormtest.linalg import SpdMatrix, kron
from matnormtest.simulation import gen_matnorm_dataset

from conftest import random_spd_array


def rel_fro(A, B):
    return np.linalg.norm(A - B) / np.linalg.norm(B)


def kron_cov(params):
    return kron(params.V.matrix, params.U.matrix)


class TestEstimateMvn:
    def test_hand_computed(self):
        est = estimate_mvn(MatrixDataset([[[0.0]], [[2.0]], [[1.0]]]))
        assert est.params.mu.tolist() == [1.0]
        assert est.params.Sigma.matrix.tolist() == [[1.0]]

    def test_below_minimum_sample(self):
        # N = 2 < rc + 2 = 3
        with pytest.raises(SampleTooSmall):
            estimate_mvn(MatrixDataset([[[0.0]], [[2.0]]]))

    def test_identical_matrices(self):
        with pytest.raises(SingularCovariance):
            estimate_mvn(MatrixDataset(np.ones((10, 2, 2))))

    def test_consistency(self, rng):
        p = MatrixNormalParams(rng.standard_normal((2, 2)), random_spd_array(rng, 2), random_spd_array(rng, 2))
        data = sample_matrix_normal(p, 5000, 3)
        assert rel_fro(estimate_mvn(data).params.Sigma.matrix, kron_cov(p)) <= 0.1

    def test_matches_numpy_cov(self, rng):
        data = MatrixDataset(rng.standard_normal((40, 3, 2)))
        est = estimate_mvn(data).params
        assert np.allclose(est.Sigma.matrix, np.cov(data.vecs(), rowvar=False), rtol=1e-12, atol=1e-14)
        assert np.allclose(est.mu, data.vecs().mean(axis=0))


class TestNormalizeScale:
    def test_already_normalized(self, rng):
        U = random_spd_array(rng, 3)
        U = U * 3 / np.trace(U)
        V = random_spd_array(rng, 2)
        U2, V2, kappa = normalize_scale(U, V)
        assert kappa == pytest.approx(1.0, abs=1e-15)
        assert np.allclose(U2.matrix, U, rtol=1e-15)
        assert np.allclose(V2.matrix, V, rtol=1e-15)

    def test_two_identity(self, rng):
        V = random_spd_array(rng, 3)
        U2, V2, kappa = normalize_scale(2 * np.eye(2), V)
        assert kappa == 0.5
        assert np.array_equal(U2.matrix, np.eye(2))
        assert np.allclose(V2.matrix, 2 * V, rtol=1e-15, atol=0)

    @settings(max_examples=40, deadline=None)
    @given(r=st.integers(1, 5), c=st.integers(1, 5), seed=st.integers(0, 2**32 - 1))
    def test_kron_preserved(self, r, c, seed):
        rng = np.random.default_rng(seed)
        U = random_spd_array(rng, r) * rng.uniform(0.01, 100)
        V = random_spd_array(rng, c)
        U2, V2, kappa = normalize_scale(U, V)
        assert np.trace(U2.matrix) == pytest.approx(r, rel=1e-12)
        assert rel_fro(kron(V2.matrix, U2.matrix), kron(V, U)) <= 1e-12


class TestFlipFlop:
    def test_column_vectors_match_multivariate_mle(self, rng):
        Y = rng.standard_normal((200, 3)) @ np.array([[1, 0, 0], [0.5, 2, 0], [-1, 0.3, 0.7]]).T
        data = MatrixDataset(Y[:, :, None])
        rep = flip_flop_mle(data)
        R = Y - Y.mean(axis=0)
        mle = R.T @ R / len(Y)
        assert np.allclose(kron_cov(rep.params), mle, rtol=0, atol=1e-8)
        assert np.allclose(rep.params.M[:, 0], Y.mean(axis=0))

    def test_consistency_large_n(self):
        data, truth = gen_matnorm_dataset(10_000, 2, 2, 17)
        rep = flip_flop_mle(data)
        assert rel_fro(kron_cov(rep.params), kron_cov(truth)) <= 0.1

    def test_identical_matrices(self):
        with pytest.raises(SingularUpdate):
            flip_flop_mle(MatrixDataset(np.ones((10, 2, 3))))

    def test_too_small(self):
        with pytest.raises(SampleTooSmall):
            flip_flop_mle(MatrixDataset(np.zeros((1, 2, 2))))

    def test_report_invariants(self):
        data, _ = gen_matnorm_dataset(300, 3, 4, 5)
        rep = flip_flop_mle(data, tol=1e-8)
        assert rep.iterations >= 1
        assert rep.converged
        assert 0 <= rep.loglik_delta <= 1e-8
        assert np.trace(rep.params.U.matrix) == pytest.approx(3, abs=1e-9)
        assert rep.normalization_kappa > 0
        total = sum(matnorm_logpdf(X, rep.params) for X in data.data)
        assert rep.final_loglik == pytest.approx(total, rel=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_loglik_monotone(self, seed):
        data, _ = gen_matnorm_dataset(60, 4, 3, seed)
        rep = flip_flop_mle(data, tol=1e-12)
        trace = np.array(rep.loglik_trace)
        assert np.all(np.diff(trace) >= -1e-9)

    def test_monotone_on_non_kronecker_data(self):
        from matnormtest.simulation import gen_nonkron_dataset

        data = gen_nonkron_dataset(200, 16, 3)
        trace = np.array(flip_flop_mle(data, tol=1e-12).loglik_trace)
        assert len(trace) > 2
        assert np.all(np.diff(trace) >= -1e-9)

    @pytest.mark.parametrize("kappa", [1e-3, 0.5, 7.0, 1e4])
    def test_invariant_to_initial_scale(self, kappa, rng):
        data, _ = gen_matnorm_dataset(150, 3, 3, 9)
        V0 = random_spd_array(rng, 3)
        a = flip_flop_mle(data, tol=1e-12, V0=V0)
        b = flip_flop_mle(data, tol=1e-12, V0=kappa * V0)
        assert np.allclose(kron_cov(a.params), kron_cov(b.params), rtol=0, atol=1e-8)

    def test_max_iterations(self):
        data, _ = gen_matnorm_dataset(100, 3, 3, 1)
        with pytest.raises(MaxIterationsExceeded) as info:
            flip_flop_mle(data, tol=-1.0, max_iter=3)
        assert info.value.report.iterations == 3
        assert not info.value.report.converged
