"""Synthetic stator-current windows.

A window is a sum of real cosines plus white Gaussian noise::

    x[i] = sum_k a_k cos(2 pi f_k i / fs + phi_k) + b[i]

Noise is drawn from numpy's PCG64 bit generator seeded with the spec's
64-bit seed; Gaussian deviates come from ``Generator.standard_normal``
(ziggurat transform). Each call builds its own generator, so synthesis has no
shared state and a given :class:`SignalSpec` always yields the same samples.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import SignalSpecError
from .faults import FaultScenario, Tone

__all__ = [
    "SignalSpec",
    "SampleWindow",
    "snr_to_noise_variance",
    "synthesize",
    "scenario_to_spec",
    "write_window",
    "read_window",
    "DEFAULT_N_SAMPLES",
    "DEFAULT_FS",
]

DEFAULT_N_SAMPLES = 1600
DEFAULT_FS = 1000.0


@dataclass(frozen=True)
class SignalSpec:
    """Recipe for one window.

    ``snr_db=None`` means noiseless.
    """

    components: tuple[Tone, ...]
    n_samples: int = DEFAULT_N_SAMPLES
    fs: float = DEFAULT_FS
    snr_db: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        comps = tuple(Tone(*map(float, c)) for c in self.components)
        object.__setattr__(self, "components", comps)
        if self.n_samples < 1:
            raise SignalSpecError("n_samples must be positive")
        if not self.fs > 0:
            raise SignalSpecError(f"sampling rate must be positive, got {self.fs}")
        for c in comps:
            if not 0 <= c.frequency < self.fs / 2:
                raise SignalSpecError(
                    f"component at {c.frequency} Hz is outside [0, fs/2) for fs={self.fs}"
                )
            if c.amplitude < 0:
                raise SignalSpecError(f"negative amplitude {c.amplitude}")
        if self.n_samples < 4 * len(comps):
            raise SignalSpecError(
                f"{self.n_samples} samples are too few for {len(comps)} components"
            )
        if not 0 <= int(self.seed) < 2**64:
            raise SignalSpecError("seed must be an unsigned 64-bit integer")
        if self.snr_db is not None and not math.isfinite(self.snr_db):
            raise SignalSpecError("snr_db must be finite (use None for noiseless)")

    @property
    def noise_variance(self) -> float:
        return snr_to_noise_variance(self.components, self.snr_db)


@dataclass
class SampleWindow:
    samples: np.ndarray
    fs: float
    spec: Optional[SignalSpec] = field(default=None, repr=False)

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 1:
            raise SignalSpecError("samples must be one-dimensional")

    def __len__(self):
        return len(self.samples)


def snr_to_noise_variance(components: Sequence, snr_db: Optional[float]) -> float:
    """Noise variance giving ``snr_db`` against the total sinusoid power.

    Signal power is ``sum(a_k**2) / 2``. ``snr_db=None`` returns 0.
    """
    if snr_db is None:
        return 0.0
    power = sum(Tone(*c).amplitude ** 2 for c in components) / 2.0
    if power <= 0:
        raise SignalSpecError("signal power is zero; SNR is undefined")
    return power / 10.0 ** (snr_db / 10.0)


def synthesize(spec: SignalSpec) -> SampleWindow:
    n = np.arange(spec.n_samples)
    x = np.zeros(spec.n_samples)
    for f, a, phi in spec.components:
        if a == 0:
            continue
        x += a * np.cos(2 * np.pi * f * n / spec.fs + phi)
    var = spec.noise_variance
    if var > 0:
        rng = np.random.Generator(np.random.PCG64(int(spec.seed)))
        x += math.sqrt(var) * rng.standard_normal(spec.n_samples)
    return SampleWindow(x, spec.fs, spec)


def scenario_to_spec(
    scn: FaultScenario,
    n_samples: int = DEFAULT_N_SAMPLES,
    fs: float = DEFAULT_FS,
    snr_db: Optional[float] = None,
    seed: int = 0,
    sideband_scale: Optional[float] = None,
) -> SignalSpec:
    """Build the signal recipe for a fault scenario.

    With ``sideband_scale`` set, every sideband amplitude becomes
    ``sideband_scale * a0``. Zero-amplitude components are dropped, so
    ``sideband_scale=0`` yields the bare fundamental.
    """
    if sideband_scale is not None and sideband_scale < 0:
        raise SignalSpecError(f"sideband_scale must be non-negative, got {sideband_scale}")
    a0 = scn.fundamental.amplitude
    comps = [scn.fundamental]
    for sb in scn.sidebands:
        if not 0 < sb.frequency < fs / 2:
            raise SignalSpecError(f"sideband {sb.frequency} Hz is outside (0, fs/2)")
        amp = sb.amplitude if sideband_scale is None else sideband_scale * a0
        comps.append(Tone(sb.frequency, amp, sb.phase))
    comps = tuple(c for c in comps if c.amplitude > 0)
    return SignalSpec(comps, n_samples=n_samples, fs=fs, snr_db=snr_db, seed=seed)


# --- file format --------------------------------------------------------------

def _meta_path(path):
    return os.path.splitext(os.fspath(path))[0] + ".meta"


def write_window(path, window: SampleWindow, meta: bool = True) -> None:
    """Write ``index,amperes`` CSV (17 significant digits) plus a ``.meta`` sidecar."""
    with open(path, "w", newline="\n") as fh:
        fh.write("index,amperes\n")
        for i, v in enumerate(window.samples):
            fh.write(f"{i},{v:.17g}\n")
    if not meta:
        return
    lines = [f"fs={window.fs:.17g}", f"n_samples={len(window)}"]
    spec = window.spec
    if spec is not None:
        lines.append(f"seed={spec.seed}")
        lines.append("snr_db=" + ("noiseless" if spec.snr_db is None else f"{spec.snr_db:.17g}"))
        lines.append(f"noise_variance={spec.noise_variance:.17g}")
        comps = ";".join(f"{c.frequency:.17g}:{c.amplitude:.17g}:{c.phase:.17g}" for c in spec.components)
        lines.append(f"components={comps}")
    with open(_meta_path(path), "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_meta(path) -> dict[str, str]:
    meta = {}
    mp = _meta_path(path)
    if not os.path.exists(mp):
        return meta
    with open(mp) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"{mp}: malformed line {line!r}")
            meta[key.strip()] = value.strip()
    return meta


def read_window(path, fs: Optional[float] = None) -> SampleWindow:
    """Read a window written by :func:`write_window`.

    ``fs`` falls back to the sidecar; one of the two is required.
    """
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "index,amperes":
            raise ValueError(f"{path}: expected header 'index,amperes', got {header!r}")
        values = []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            idx, sep, val = line.partition(",")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected 'index,amperes'")
            if int(idx) != len(values):
                raise ValueError(f"{path}:{lineno}: index {idx} out of sequence")
            values.append(float(val))
    if fs is None:
        meta = read_meta(path)
        if "fs" not in meta:
            raise ValueError(f"{path}: sampling rate unknown (no .meta sidecar); pass fs")
        fs = float(meta["fs"])
    return SampleWindow(np.array(values), float(fs), None)
