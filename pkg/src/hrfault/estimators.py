"""High-resolution frequency estimators for sums of real sinusoids.

Seven methods are provided: extended (least-squares) Prony, Pisarenko,
Root-MUSIC, FFT-MUSIC, EV, ESPRIT (total least squares) and Min-Norm. A real
sinusoid occupies a conjugate pair of complex exponentials, so ``p_real`` real
tones give a signal subspace of dimension ``2 * p_real``.

Every estimator takes a :class:`~hrfault.synthesis.SampleWindow` and an
:class:`EstimatorConfig` and returns an :class:`EstimateSet` whose
frequencies are in Hz, ascending. Each call is timed end to end (correlation
matrix included) with a monotonic clock.
"""

from __future__ import annotations

import functools
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    DegenerateSubspaceError,
    EstimationError,
    IllConditionedError,
    PeakCountError,
    RankDeficiencyError,
    RootSelectionError,
)
from .subspace import (
    CORR_METHODS,
    SubspaceSplit,
    autocorrelation_matrix,
    eig_hermitian_sorted,
    least_squares,
    poly_roots,
    tls_solve,
)

__all__ = [
    "METHODS",
    "GRID_METHODS",
    "SUBSPACE_METHODS",
    "EstimatorConfig",
    "EstimateSet",
    "Pseudospectrum",
    "prony_estimate",
    "pisarenko_estimate",
    "root_music_estimate",
    "fft_music_estimate",
    "ev_estimate",
    "esprit_estimate",
    "min_norm_estimate",
    "estimate",
    "estimate_amplitudes",
    "pseudospectrum",
    "subspace_split",
    "music_null_spectrum",
    "ev_null_spectrum",
    "min_norm_vector",
    "refine_minima",
]

METHODS = ("prony", "pisarenko", "root-music", "fft-music", "ev", "esprit", "min-norm")
GRID_METHODS = ("fft-music", "ev", "min-norm")
SUBSPACE_METHODS = ("root-music", "fft-music", "ev", "esprit", "min-norm")

DEFAULT_M_DIM = 32
DEFAULT_GRID_SIZE = 4096
DEFAULT_CORR_METHOD = "covariance"

# relative floor for EV noise eigenvalues
EV_CLAMP = 1e-12
# Pisarenko: weakest signal eigenvalue below this multiple of the noise
# eigenvalue is reported as low confidence
PISARENKO_CONFIDENCE_RATIO = 2.0


@dataclass(frozen=True)
class EstimatorConfig:
    """Estimator selection and its tuning.

    Pisarenko always runs with ``m_dim = 2 * p_real + 1``; the field is
    overwritten on construction.
    """

    method: str
    p_real: int
    m_dim: int = DEFAULT_M_DIM
    grid_size: int = DEFAULT_GRID_SIZE
    corr_method: str = DEFAULT_CORR_METHOD

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {', '.join(METHODS)}")
        if int(self.p_real) != self.p_real or self.p_real < 1:
            raise ValueError(f"model order must be a positive integer, got {self.p_real}")
        if self.corr_method not in CORR_METHODS:
            raise ValueError(f"unknown correlation method {self.corr_method!r}")
        if self.method == "pisarenko":
            object.__setattr__(self, "m_dim", 2 * self.p_real + 1)
        elif self.method in SUBSPACE_METHODS and not self.m_dim > 2 * self.p_real + 1:
            raise ValueError(
                f"{self.method} needs m_dim > 2*p_real + 1 = {2 * self.p_real + 1}, got {self.m_dim}"
            )
        if self.method in GRID_METHODS:
            g = self.grid_size
            if g < 1024 or g & (g - 1):
                raise ValueError(f"grid_size must be a power of two >= 1024, got {g}")

    def replace(self, **changes) -> "EstimatorConfig":
        values = dict(method=self.method, p_real=self.p_real, m_dim=self.m_dim,
                      grid_size=self.grid_size, corr_method=self.corr_method)
        values.update(changes)
        return EstimatorConfig(**values)


@dataclass
class EstimateSet:
    """Output of one estimator run.

    ``roots`` holds the internal complex root or eigenvalue set when the
    method has one (normalized, unit circle = undamped). ``flags`` collects
    non-fatal diagnostics such as ``"low-confidence"``.
    """

    frequencies: np.ndarray
    method: str
    config: EstimatorConfig
    elapsed: float = 0.0
    amplitudes: Optional[np.ndarray] = None
    flags: tuple[str, ...] = ()
    roots: Optional[np.ndarray] = field(default=None, repr=False)


@dataclass(frozen=True)
class Pseudospectrum:
    grid: np.ndarray  # normalized frequency, cycles/sample
    values: np.ndarray


def _timed(method):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(w, cfg):
            if cfg.method != method:
                cfg = cfg.replace(method=method)
            t0 = time.perf_counter()
            try:
                result = fn(w, cfg)
            except EstimationError as exc:
                if exc.method is None:
                    exc.method = method
                raise
            result.elapsed = time.perf_counter() - t0
            return result

        return wrapper

    return decorate


def _samples(w):
    return np.asarray(getattr(w, "samples", w), dtype=float)


def _upper_roots(roots, p, key):
    """Up to ``p`` roots from the upper half plane, ordered by ``key`` (ascending)."""
    upper = roots[roots.imag > 0]
    return upper[np.argsort(key(upper), kind="stable")][:p]


def _to_hz(z, fs):
    return np.sort(np.angle(z) / (2 * np.pi) * fs)


def _result(freqs, cfg, flags=(), roots=None):
    if len(freqs) < cfg.p_real:
        flags = tuple(flags) + ("incomplete",)
    return EstimateSet(np.asarray(freqs, dtype=float), cfg.method, cfg, flags=tuple(flags), roots=roots)


def subspace_split(w, cfg: EstimatorConfig) -> SubspaceSplit:
    r = autocorrelation_matrix(_samples(w), cfg.m_dim, cfg.corr_method)
    return eig_hermitian_sorted(r, 2 * cfg.p_real)


# --- polynomial / eigenvalue methods --------------------------------------------

@_timed("prony")
def prony_estimate(w, cfg: EstimatorConfig) -> EstimateSet:
    """Extended Prony: least-squares fit of the order-2P linear recursion.

    Solves ``x[n] = -sum_i b_i x[n-i]`` over every available row, roots
    ``z^2P + b_1 z^(2P-1) + ... + b_2P`` and keeps the P upper-half roots with
    the largest modulus (least damped).
    """
    x = _samples(w)
    p = cfg.p_real
    q = 2 * p
    n = len(x)
    if n < 4 * p:
        raise RankDeficiencyError(f"{n} samples are too few for order {q}")
    a = np.column_stack([x[q - i : n - i] for i in range(1, q + 1)])
    b = least_squares(a, -x[q:])
    roots = poly_roots(np.concatenate(([1.0], b))).roots
    picked = _upper_roots(roots, p, key=lambda z: -np.abs(z))
    return _result(_to_hz(picked, w.fs), cfg, roots=roots)


@_timed("pisarenko")
def pisarenko_estimate(w, cfg: EstimatorConfig) -> EstimateSet:
    """Pisarenko harmonic decomposition on a ``(2P+1)``-order correlation matrix.

    The eigenvector of the smallest eigenvalue gives the recursion
    coefficients; roots of that polynomial lie on the unit circle at the tone
    frequencies.
    """
    split = subspace_split(w, cfg)
    lam = split.eigenvalues
    scale = max(abs(lam[-1]), np.finfo(float).tiny)
    if lam[1] - lam[0] <= 1e-10 * scale:
        raise DegenerateSubspaceError("smallest eigenvalue is repeated; noise subspace is not one-dimensional")
    flags = []
    if lam[1] < PISARENKO_CONFIDENCE_RATIO * max(lam[0], 0.0):
        flags.append("low-confidence")
    v = split.basis[:, 0]
    roots = poly_roots(v).roots
    picked = _upper_roots(roots, cfg.p_real, key=lambda z: np.abs(np.abs(z) - 1))
    return _result(_to_hz(picked, w.fs), cfg, flags, roots=roots)


def _root_music_polynomial(noise_basis):
    c = noise_basis @ noise_basis.conj().T
    m = c.shape[0]
    return np.array([np.trace(c, offset=d) for d in range(m - 1, -m, -1)])


def _root_music_from_split(split: SubspaceSplit, p, fs):
    coeffs = _root_music_polynomial(split.noise_basis)
    roots = poly_roots(coeffs).roots
    inside = roots[np.abs(roots) < 1]
    picked = _upper_roots(inside, p, key=lambda z: -np.abs(z))
    if len(picked) < p:
        raise RootSelectionError(f"only {len(picked)} of {p} root pairs found inside the unit circle")
    return _to_hz(picked, fs), roots


@_timed("root-music")
def root_music_estimate(w, cfg: EstimatorConfig) -> EstimateSet:
    """Root-MUSIC.

    Builds the degree ``2(M-1)`` polynomial whose coefficients are the
    diagonal sums of ``G G^H`` (G = noise eigenvectors) and keeps the P
    upper-half roots strictly inside the unit circle closest to it.
    """
    freqs, roots = _root_music_from_split(subspace_split(w, cfg), cfg.p_real, w.fs)
    return _result(freqs, cfg, roots=roots)


@_timed("esprit")
def esprit_estimate(w, cfg: EstimatorConfig) -> EstimateSet:
    """TLS-ESPRIT on the 2P-dimensional signal subspace."""
    u = subspace_split(w, cfg).signal_basis
    psi = tls_solve(u[:-1], u[1:])
    eig = np.linalg.eigvals(psi)
    picked = _upper_roots(eig, cfg.p_real, key=lambda z: np.abs(np.abs(z) - 1))
    return _result(_to_hz(picked, w.fs), cfg, roots=eig)


# --- grid (pseudospectrum) methods ----------------------------------------------

def _spectrum_rows(vectors, grid_size):
    """|e(f)^H v|^2 on the half grid for each column of ``vectors``."""
    f = np.fft.fft(vectors, grid_size, axis=0)[: grid_size // 2 + 1]
    return f.real**2 + f.imag**2


def music_null_spectrum(split: SubspaceSplit, grid_size: int) -> np.ndarray:
    return _spectrum_rows(split.noise_basis, grid_size).sum(axis=1)


def ev_null_spectrum(split: SubspaceSplit, grid_size: int) -> tuple[np.ndarray, bool]:
    """EV denominator ``sum_i |e^H v_i|^2 / lambda_i`` over noise eigenpairs.

    Returns the spectrum and whether any eigenvalue had to be clamped to
    ``EV_CLAMP * lambda_max``.
    """
    lam = split.noise_eigenvalues
    top = split.eigenvalues[-1]
    if not top > 0:
        # zero matrix: no scale to clamp against, weight uniformly
        return _spectrum_rows(split.noise_basis, grid_size).sum(axis=1), True
    floor = EV_CLAMP * top
    clamped = bool(np.any(lam < floor))
    lam = np.maximum(lam, floor)
    return _spectrum_rows(split.noise_basis, grid_size) @ (1.0 / lam), clamped


def min_norm_vector(split: SubspaceSplit) -> np.ndarray:
    """Minimum-norm noise-subspace vector with unit first element."""
    g = split.noise_basis
    c = g @ g[0].conj()
    if abs(c[0]) <= 1e-12:
        raise DegenerateSubspaceError("first basis vector is orthogonal to the noise subspace")
    return c / c[0]


def refine_minima(null, p, fs):
    """Locate the ``p`` deepest local minima of a null spectrum on the half grid.

    Each minimum is refined by a three-point parabola through the null
    spectrum itself (it is locally quadratic around a zero). Returns
    ascending frequencies in Hz.
    """
    grid_size = 2 * (len(null) - 1)
    span = null.max() - null.min()
    if not span > 1e-9 * abs(null.max()):
        raise PeakCountError("pseudospectrum is flat")
    mid = null[1:-1]
    idx = np.flatnonzero((mid < null[:-2]) & (mid < null[2:])) + 1
    if len(idx) < p:
        raise PeakCountError(f"found {len(idx)} peaks, need {p}")
    idx = idx[np.argsort(null[idx], kind="stable")][:p]
    left, centre, right = null[idx - 1], null[idx], null[idx + 1]
    curv = left - 2 * centre + right
    with np.errstate(divide="ignore", invalid="ignore"):
        offset = np.where(curv > 0, 0.5 * (left - right) / curv, 0.0)
    offset = np.clip(offset, -0.5, 0.5)
    freqs = (idx + offset) / grid_size * fs
    return np.sort(np.clip(freqs, 0.0, fs / 2))


def _null_spectrum(w, cfg):
    split = subspace_split(w, cfg)
    flags = ()
    if cfg.method == "fft-music":
        null = music_null_spectrum(split, cfg.grid_size)
    elif cfg.method == "ev":
        null, clamped = ev_null_spectrum(split, cfg.grid_size)
        if clamped:
            flags = ("clamped-eigenvalues",)
    elif cfg.method == "min-norm":
        null = _spectrum_rows(min_norm_vector(split)[:, None], cfg.grid_size)[:, 0]
    else:
        raise ValueError(f"{cfg.method} is not a grid method")
    return null, flags


def pseudospectrum(w, cfg: EstimatorConfig) -> Pseudospectrum:
    """Pseudospectrum ``1 / null`` of a grid method on ``grid_size/2 + 1`` points."""
    null, _ = _null_spectrum(w, cfg)
    grid = np.arange(len(null)) / cfg.grid_size
    return Pseudospectrum(grid, 1.0 / np.maximum(null, np.finfo(float).tiny))


def _grid_estimate(w, cfg):
    null, flags = _null_spectrum(w, cfg)
    return _result(refine_minima(null, cfg.p_real, w.fs), cfg, flags)


@_timed("fft-music")
def fft_music_estimate(w, cfg: EstimatorConfig) -> EstimateSet:
    return _grid_estimate(w, cfg)


@_timed("ev")
def ev_estimate(w, cfg: EstimatorConfig) -> EstimateSet:
    return _grid_estimate(w, cfg)


@_timed("min-norm")
def min_norm_estimate(w, cfg: EstimatorConfig) -> EstimateSet:
    return _grid_estimate(w, cfg)


_DISPATCH = {
    "prony": prony_estimate,
    "pisarenko": pisarenko_estimate,
    "root-music": root_music_estimate,
    "fft-music": fft_music_estimate,
    "ev": ev_estimate,
    "esprit": esprit_estimate,
    "min-norm": min_norm_estimate,
}


def estimate(w, cfg: EstimatorConfig, amplitudes: bool = False) -> EstimateSet:
    """Run the configured estimator.

    With ``amplitudes=True`` the tone amplitudes are fitted afterwards; that
    fit is not included in ``elapsed``.
    """
    result = _DISPATCH[cfg.method](w, cfg)
    if amplitudes and len(result.frequencies):
        result.amplitudes = estimate_amplitudes(w, result.frequencies)
    return result


def estimate_amplitudes(w, freqs) -> np.ndarray:
    """Least-squares amplitudes of real tones at known frequencies."""
    x = _samples(w)
    fs = w.fs
    freqs = np.asarray(freqs, dtype=float)
    if np.any(freqs < 0) or np.any(freqs >= fs / 2):
        raise ValueError("frequencies must lie in [0, fs/2)")
    guard = fs / len(x) / 4
    if len(freqs) > 1 and np.min(np.diff(np.sort(freqs))) < guard:
        raise IllConditionedError(f"frequencies closer than {guard:.4g} Hz cannot be separated")
    n = np.arange(len(x))
    cols = []
    for f in freqs:
        cols.append(np.cos(2 * np.pi * f * n / fs))
        if f > 0:
            cols.append(np.sin(2 * np.pi * f * n / fs))
    coef = least_squares(np.column_stack(cols), x)
    amps = []
    i = 0
    for f in freqs:
        if f > 0:
            amps.append(np.hypot(coef[i], coef[i + 1]))
            i += 2
        else:
            amps.append(abs(coef[i]))
            i += 1
    return np.array(amps)
