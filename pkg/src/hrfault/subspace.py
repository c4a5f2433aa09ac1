"""Numerical kernels shared by the estimators.

Correlation-matrix estimation, sorted Hermitian eigendecomposition split into
noise and signal bases, companion-matrix polynomial rooting, and
least-squares / total-least-squares solves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import DegenerateRotationError, NumericalFailure, RankDeficiencyError

__all__ = [
    "CORR_METHODS",
    "CorrelationEstimate",
    "SubspaceSplit",
    "PolynomialRoots",
    "autocorrelation_matrix",
    "eig_hermitian_sorted",
    "poly_roots",
    "least_squares",
    "tls_solve",
    "steering_vector",
]

CORR_METHODS = ("covariance", "biased-toeplitz")


@dataclass(frozen=True)
class CorrelationEstimate:
    matrix: np.ndarray
    m_dim: int
    method: str


@dataclass(frozen=True)
class SubspaceSplit:
    """Ascending eigenpairs of a correlation matrix.

    The first ``m - p_signal`` columns of ``basis`` span the noise subspace,
    the last ``p_signal`` the signal subspace.
    """

    eigenvalues: np.ndarray
    basis: np.ndarray
    p_signal: int

    @property
    def noise_basis(self) -> np.ndarray:
        return self.basis[:, : self.basis.shape[1] - self.p_signal]

    @property
    def signal_basis(self) -> np.ndarray:
        return self.basis[:, self.basis.shape[1] - self.p_signal :]

    @property
    def noise_eigenvalues(self) -> np.ndarray:
        return self.eigenvalues[: len(self.eigenvalues) - self.p_signal]


@dataclass(frozen=True)
class PolynomialRoots:
    coefficients: np.ndarray
    roots: np.ndarray

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1


def _samples(w):
    return np.asarray(getattr(w, "samples", w))


def autocorrelation_matrix(w, m_dim: int, method: str = "covariance") -> CorrelationEstimate:
    """Estimate the ``m_dim x m_dim`` correlation matrix of a window.

    Parameters
    ----------
    w : SampleWindow or array_like
        Input samples.
    m_dim : int
        Matrix dimension; at most half the window length.
    method : {"covariance", "biased-toeplitz"}
        ``covariance`` averages outer products of the ``N - M + 1`` sliding
        length-M snapshots. ``biased-toeplitz`` arranges the biased lag
        estimates ``r[l] = sum_i x[i+l] conj(x[i]) / N`` in a Hermitian
        Toeplitz matrix.
    """
    x = _samples(w)
    n = len(x)
    if int(m_dim) != m_dim or m_dim < 1:
        raise ValueError(f"m_dim must be a positive integer, got {m_dim}")
    if m_dim > n / 2:
        raise ValueError(f"m_dim={m_dim} is too large for a {n}-sample window")
    if method == "biased-toeplitz":
        r = np.array([np.vdot(x[: n - lag], x[lag:]) for lag in range(m_dim)]) / n
        if np.isrealobj(x):
            r = r.real
        mat = sla.toeplitz(r, r.conj())
    elif method == "covariance":
        snaps = np.lib.stride_tricks.sliding_window_view(x, m_dim)
        mat = snaps.T @ snaps.conj() / snaps.shape[0]
        # symmetrize away rounding so the result is Hermitian exactly
        mat = 0.5 * (mat + mat.conj().T)
    else:
        raise ValueError(f"unknown correlation method {method!r}; expected one of {CORR_METHODS}")
    return CorrelationEstimate(mat, int(m_dim), method)


def eig_hermitian_sorted(r, p_signal: int) -> SubspaceSplit:
    mat = r.matrix if isinstance(r, CorrelationEstimate) else np.asarray(r)
    m = mat.shape[0]
    if not 0 <= p_signal < m:
        raise ValueError(f"p_signal={p_signal} must be below the matrix dimension {m}")
    try:
        vals, vecs = sla.eigh(mat)
    except (np.linalg.LinAlgError, ValueError) as exc:
        with np.errstate(all="ignore"):
            cond = np.linalg.cond(mat)
        raise NumericalFailure(f"eigendecomposition failed ({exc}); condition number {cond:.3g}") from exc
    return SubspaceSplit(vals, vecs, int(p_signal))


def poly_roots(coefficients) -> PolynomialRoots:
    """Roots of a polynomial given in descending-degree order.

    Computed as the eigenvalues of the companion matrix.
    """
    c = np.atleast_1d(np.asarray(coefficients))
    if c.ndim != 1:
        raise ValueError("coefficients must be one-dimensional")
    nz = np.flatnonzero(c)
    if nz.size == 0:
        raise ValueError("all-zero polynomial has no defined roots")
    c = c[nz[0] :]
    deg = len(c) - 1
    if deg < 1:
        raise ValueError("polynomial must have degree at least 1")
    comp = np.zeros((deg, deg), dtype=np.result_type(c.dtype, float))
    comp[0, :] = -c[1:] / c[0]
    comp[np.arange(1, deg), np.arange(deg - 1)] = 1.0
    roots = sla.eigvals(comp, overwrite_a=True, check_finite=False)
    return PolynomialRoots(c, roots)


def least_squares(a, b, rcond: float = 1e-10) -> np.ndarray:
    """Minimize ``||a x - b||_2`` via a rank-revealing complete orthogonal factorization.

    Raises :class:`RankDeficiencyError` (carrying the effective rank) when
    ``a`` loses column rank at tolerance ``rcond``.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] < a.shape[1]:
        raise ValueError(f"need a tall matrix, got shape {a.shape}")
    if not np.any(a):
        raise RankDeficiencyError("design matrix is all zeros", rank=0)
    x, _, rank, _ = sla.lstsq(a, b, cond=rcond, lapack_driver="gelsy")
    if rank < a.shape[1]:
        raise RankDeficiencyError(
            f"design matrix has effective rank {rank} < {a.shape[1]}", rank=int(rank)
        )
    return x


def tls_solve(s1, s2, rcond: float = 1e-10) -> np.ndarray:
    """Total-least-squares solution ``psi`` of ``s1 @ psi ~= s2``.

    From the SVD of ``[s1 | s2]`` with right singular vectors partitioned into
    ``q x q`` blocks, ``psi = -V12 @ inv(V22)``.
    """
    s1 = np.asarray(s1)
    s2 = np.asarray(s2)
    if s1.shape != s2.shape or s1.ndim != 2:
        raise ValueError("s1 and s2 must be matrices of equal shape")
    rows, q = s1.shape
    if rows < q:
        raise ValueError("need at least as many rows as columns")
    sv1 = np.linalg.svd(s1, compute_uv=False)
    if sv1[0] == 0 or sv1[-1] <= rcond * sv1[0]:
        raise DegenerateRotationError("first subspace view is rank deficient")
    _, _, vh = np.linalg.svd(np.hstack([s1, s2]))
    v = vh.conj().T
    v12 = v[:q, q:]
    v22 = v[q:, q:]
    sv22 = np.linalg.svd(v22, compute_uv=False)
    if sv22[-1] <= rcond:
        raise DegenerateRotationError("singular V22 block; subspace pair is ill-posed")
    return -np.linalg.solve(v22.T, v12.T).T


def steering_vector(freq: float, m_dim: int, fs: float = 1.0) -> np.ndarray:
    return np.exp(2j * np.pi * freq / fs * np.arange(m_dim))
