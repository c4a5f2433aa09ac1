"""
Synthetic stator current
========================

A window is the 10 A supply line plus two fault sidebands plus white Gaussian
noise. The SNR is measured against the total power of all tones, so the noise
variance for a given SNR is fixed by the amplitudes alone.
"""

import numpy as np

from hrfault import scenario_by_name, scenario_to_spec, synthesize
from hrfault.synthesis import snr_to_noise_variance

scn = scenario_by_name("broken-rotor")

# Default sideband amplitude is the scenario's literal 1 A. A sideband_scale
# replaces it by scale * a0, which is how the amplitude sweep works.
for snr in (0, 30, 60):
    spec = scenario_to_spec(scn, snr_db=snr, seed=1)
    print(f"SNR {snr:3d} dB -> noise variance {spec.noise_variance:.4g} A^2")
print("check:", snr_to_noise_variance([(50, 10)], 20), "A^2 for a lone 10 A tone at 20 dB")

# The same spec (including the seed) always yields the same samples.
spec = scenario_to_spec(scn, snr_db=30, seed=42)
x = synthesize(spec).samples
assert np.array_equal(x, synthesize(spec).samples)

# Periodogram of the window: the 50 Hz line dominates, the 1 A sidebands are
# 20 dB below it and spread over neighbouring bins because 1600 samples do not
# hold an integer number of their periods.
power = np.abs(np.fft.rfft(x)) ** 2 / len(x)
freqs = np.fft.rfftfreq(len(x), 1 / spec.fs)
for f in scn.frequencies:
    k = int(np.argmin(np.abs(freqs - f)))
    print(f"{f:7.2f} Hz: bin {freqs[k]:.3f} Hz, {10 * np.log10(power[k]):6.1f} dB")
print(f"resolution of the periodogram: {freqs[1]:.3f} Hz")
