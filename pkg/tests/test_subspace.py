import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hrfault.errors import DegenerateRotationError, RankDeficiencyError
from hrfault.faults import scenario_by_name
from hrfault.subspace import (
    CorrelationEstimate,
    autocorrelation_matrix,
    eig_hermitian_sorted,
    least_squares,
    poly_roots,
    steering_vector,
    tls_solve,
)
from hrfault.synthesis import SignalSpec, scenario_to_spec, synthesize


def cosine(freq, n=1600, fs=1000.0, amp=1.0):
    return synthesize(SignalSpec([(freq, amp, 0.0)], n_samples=n, fs=fs))


class TestAutocorrelation:
    def test_constant_biased(self):
        r = autocorrelation_matrix(np.ones(8), 2, "biased-toeplitz").matrix
        np.testing.assert_allclose(r, [[1.0, 7 / 8], [7 / 8, 1.0]], atol=1e-15)

    @pytest.mark.parametrize("method", ["biased-toeplitz", "covariance"])
    def test_zeros(self, method):
        assert not np.any(autocorrelation_matrix(np.zeros(16), 4, method).matrix)

    @pytest.mark.parametrize("method", ["biased-toeplitz", "covariance"])
    def test_cosine_lags(self, method):
        r = autocorrelation_matrix(cosine(125.0), 4, method).matrix
        lags = np.arange(4)
        expected = 0.5 * np.cos(2 * np.pi * 125.0 * lags / 1000.0)
        np.testing.assert_allclose(r[0], expected, atol=1e-3)

    @pytest.mark.parametrize("method", ["biased-toeplitz", "covariance"])
    def test_hermitian_exactly(self, method):
        x = np.random.default_rng(3).standard_normal(200)
        r = autocorrelation_matrix(x, 12, method).matrix
        assert np.array_equal(r, r.conj().T)

    def test_biased_is_toeplitz(self):
        x = np.random.default_rng(4).standard_normal(100)
        r = autocorrelation_matrix(x, 6, "biased-toeplitz").matrix
        for d in range(-5, 6):
            diag = np.diagonal(r, d)
            assert np.all(diag == diag[0])

    def test_complex_input_orientation(self):
        z = np.exp(2j * np.pi * 0.1 * np.arange(400))
        r = autocorrelation_matrix(z, 3, "biased-toeplitz").matrix
        # r[i, j] estimates E[x[n+i] conj(x[n+j])]
        assert np.angle(r[1, 0]) == pytest.approx(2 * np.pi * 0.1, abs=1e-9)

    def test_dimension_too_large(self):
        with pytest.raises(ValueError):
            autocorrelation_matrix(np.ones(10), 6)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            autocorrelation_matrix(np.ones(10), 2, "fancy")


class TestEigen:
    def test_identity(self):
        split = eig_hermitian_sorted(np.eye(3), 1)
        np.testing.assert_allclose(split.eigenvalues, [1, 1, 1])
        np.testing.assert_allclose(split.basis.conj().T @ split.basis, np.eye(3), atol=1e-12)

    def test_diagonal(self):
        split = eig_hermitian_sorted(np.diag([1.0, 5.0, 2.0]), 1)
        np.testing.assert_allclose(split.eigenvalues, [1, 2, 5])
        assert abs(split.signal_basis[1, 0]) == pytest.approx(1.0)
        assert split.noise_basis.shape == (3, 2)

    def test_noiseless_sinusoid_rank_two(self):
        r = autocorrelation_matrix(cosine(50.0), 8)
        lam = eig_hermitian_sorted(r, 2).eigenvalues
        assert np.sum(lam > 1e-8 * lam[-1]) == 2

    def test_trace_and_reconstruction(self):
        x = synthesize(scenario_to_spec(scenario_by_name("misalignment"), snr_db=20.0, seed=5)).samples
        r = autocorrelation_matrix(x, 32)
        split = eig_hermitian_sorted(r, 6)
        assert np.sum(split.eigenvalues) == pytest.approx(np.trace(r.matrix).real, rel=1e-9)
        v, lam = split.basis, split.eigenvalues
        rebuilt = (v * lam) @ v.conj().T
        assert np.linalg.norm(rebuilt - r.matrix) <= 1e-9 * np.linalg.norm(r.matrix)

    def test_psd_up_to_tolerance(self):
        x = np.random.default_rng(9).standard_normal(400)
        lam = eig_hermitian_sorted(autocorrelation_matrix(x, 16, "biased-toeplitz"), 2).eigenvalues
        assert lam[0] >= -1e-10 * lam[-1]

    def test_noise_basis_orthogonal_to_steering(self):
        scn = scenario_by_name("eccentricity")
        x = synthesize(scenario_to_spec(scn)).samples
        split = eig_hermitian_sorted(autocorrelation_matrix(x, 32), 6)
        g = split.noise_basis
        for f in scn.frequencies:
            e = steering_vector(f, 32, 1000.0)
            assert np.linalg.norm(g.conj().T @ e) <= 1e-6 * np.linalg.norm(e)

    def test_signal_dimension_bound(self):
        with pytest.raises(ValueError):
            eig_hermitian_sorted(np.eye(3), 3)

    def test_accepts_correlation_estimate(self):
        est = CorrelationEstimate(np.diag([2.0, 1.0]), 2, "covariance")
        assert list(eig_hermitian_sorted(est, 1).eigenvalues) == [1.0, 2.0]


class TestPolyRoots:
    def test_real_pair(self):
        roots = np.sort_complex(poly_roots([1, 0, -1]).roots)
        np.testing.assert_allclose(roots, [-1, 1], atol=1e-12)

    def test_imaginary_pair(self):
        roots = poly_roots([1, 0, 1]).roots
        np.testing.assert_allclose(np.sort(roots.imag), [-1, 1], atol=1e-12)
        np.testing.assert_allclose(roots.real, 0, atol=1e-12)

    def test_unit_circle_pair(self):
        w = 2 * np.pi * 0.05
        roots = poly_roots([1, -2 * np.cos(w), 1]).roots
        np.testing.assert_allclose(np.abs(roots), 1, atol=1e-12)
        np.testing.assert_allclose(np.sort(np.angle(roots)), [-w, w], atol=1e-10)

    def test_leading_zeros_stripped(self):
        pr = poly_roots([0, 0, 2, -4])
        assert pr.degree == 1
        np.testing.assert_allclose(pr.roots, [2.0])

    def test_all_zero_rejected(self):
        with pytest.raises(ValueError):
            poly_roots([0, 0, 0])

    def test_constant_rejected(self):
        with pytest.raises(ValueError):
            poly_roots([0, 3])


class TestLeastSquares:
    def test_identity(self):
        b = np.array([3.0, -1.0, 2.5])
        np.testing.assert_allclose(least_squares(np.eye(3), b), b)

    def test_consistent_overdetermined(self):
        rng = np.random.default_rng(0)
        a = rng.standard_normal((20, 4))
        x = rng.standard_normal(4)
        sol = least_squares(a, a @ x)
        assert np.linalg.norm(a @ sol - a @ x) <= 1e-10

    def test_mean_minimizes(self):
        np.testing.assert_allclose(least_squares([[1.0], [1.0]], [0.0, 2.0]), [1.0])

    def test_rank_deficient_reports_rank(self):
        a = np.column_stack([np.ones(5), np.ones(5), np.arange(5.0)])
        with pytest.raises(RankDeficiencyError) as info:
            least_squares(a, np.arange(5.0))
        assert info.value.rank == 2

    def test_wide_rejected(self):
        with pytest.raises(ValueError):
            least_squares(np.ones((2, 3)), np.ones(2))


class TestTLS:
    def test_identity_rotation(self):
        s1 = np.random.default_rng(1).standard_normal((10, 3))
        np.testing.assert_allclose(tls_solve(s1, s1), np.eye(3), atol=1e-10)

    def test_diagonal_unitary(self):
        rng = np.random.default_rng(2)
        s1 = rng.standard_normal((12, 3)) + 1j * rng.standard_normal((12, 3))
        d = np.diag(np.exp(1j * np.array([0.3, -1.1, 2.0])))
        np.testing.assert_allclose(tls_solve(s1, s1 @ d), d, atol=1e-10)

    def test_zero_column_rejected(self):
        s1 = np.random.default_rng(3).standard_normal((8, 3))
        s1[:, 1] = 0
        with pytest.raises(DegenerateRotationError):
            tls_solve(s1, s1)

    def test_matches_least_squares_when_exact(self):
        rng = np.random.default_rng(4)
        s1 = rng.standard_normal((15, 4))
        psi = rng.standard_normal((4, 4))
        s2 = s1 @ psi
        ls = np.column_stack([least_squares(s1, s2[:, k]) for k in range(4)])
        np.testing.assert_allclose(tls_solve(s1, s2), ls, atol=1e-8)


class TestKernelProperties:
    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 24), st.integers(0, 2**32 - 1))
    def test_eig_reconstruction(self, m, seed):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        h = a @ a.conj().T
        split = eig_hermitian_sorted(h, m // 2)
        v, lam = split.basis, split.eigenvalues
        assert np.all(np.diff(lam) >= 0)
        assert np.linalg.norm((v * lam) @ v.conj().T - h) <= 1e-9 * np.linalg.norm(h)
        assert np.max(np.abs(v.conj().T @ v - np.eye(m))) <= 1e-10

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 20), st.integers(0, 2**32 - 1))
    def test_poly_residual(self, degree, seed):
        rng = np.random.default_rng(seed)
        c = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
        pr = poly_roots(c)
        assert len(pr.roots) == degree
        bound = 1e-6 * np.max(np.abs(c)) * (1 + np.abs(pr.roots)) ** degree
        assert np.all(np.abs(np.polyval(c, pr.roots)) <= bound)
