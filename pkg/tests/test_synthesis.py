import math

import numpy as np
import pytest

from hrfault.errors import SignalSpecError
from hrfault.faults import Tone, scenario_by_name
from hrfault.synthesis import (
    SampleWindow,
    SignalSpec,
    read_meta,
    read_window,
    scenario_to_spec,
    snr_to_noise_variance,
    synthesize,
    write_window,
)


class TestSynthesize:
    def test_cosine_quarter_period(self):
        w = synthesize(SignalSpec([(50.0, 10.0, 0.0)], n_samples=16, fs=1000.0))
        assert w.samples[0] == 10.0
        assert w.samples[5] == pytest.approx(0.0, abs=1e-12)
        assert len(w) == 16

    def test_empty_components_give_zeros(self):
        w = synthesize(SignalSpec((), n_samples=32))
        assert np.all(w.samples == 0.0)

    def test_periodogram_peak_at_fundamental(self):
        spec = scenario_to_spec(scenario_by_name("broken-rotor"), 1600, 1000.0, 30.0, seed=7)
        x = synthesize(spec).samples
        spectrum = np.abs(np.fft.rfft(x)) ** 2
        freqs = np.fft.rfftfreq(len(x), 1 / 1000.0)
        assert abs(freqs[np.argmax(spectrum)] - 50.0) <= freqs[1]

    def test_deterministic(self):
        spec = scenario_to_spec(scenario_by_name("misalignment"), snr_db=10.0, seed=123)
        a, b = synthesize(spec).samples, synthesize(spec).samples
        assert a.tobytes() == b.tobytes()

    def test_seed_changes_noise(self):
        scn = scenario_by_name("misalignment")
        a = synthesize(scenario_to_spec(scn, snr_db=10.0, seed=1)).samples
        b = synthesize(scenario_to_spec(scn, snr_db=10.0, seed=2)).samples
        assert not np.array_equal(a, b)

    def test_aliasing_rejected(self):
        with pytest.raises(SignalSpecError):
            SignalSpec([(500.0, 1.0)], fs=1000.0)

    def test_zero_samples_rejected(self):
        with pytest.raises(SignalSpecError):
            SignalSpec([(50.0, 1.0)], n_samples=0)

    def test_too_short_for_model_order(self):
        with pytest.raises(SignalSpecError):
            SignalSpec([(50.0, 1.0), (80.0, 1.0)], n_samples=7)

    def test_seed_range(self):
        with pytest.raises(SignalSpecError):
            SignalSpec([(50.0, 1.0)], seed=2**64)


class TestNoiseStatistics:
    def test_empirical_variance_and_snr(self):
        comps = [(50.0, 10.0, 0.0), (79.01, 1.0, 0.0), (137.03, 1.0, 0.0)]
        clean = synthesize(SignalSpec(comps)).samples
        sigma2 = snr_to_noise_variance(comps, 20.0)
        p_sig = sum(a * a for _, a, _ in comps) / 2
        within_var = within_snr = 0
        for seed in range(1000):
            noise = synthesize(SignalSpec(comps, snr_db=20.0, seed=seed)).samples - clean
            var = float(np.var(noise))
            within_var += abs(var - sigma2) <= 0.15 * sigma2
            within_snr += abs(10 * math.log10(p_sig / var) - 20.0) <= 1.0
        assert within_var >= 950
        assert within_snr >= 950

    @pytest.mark.parametrize("name", ["broken-rotor", "inner-bearing", "misalignment", "eccentricity"])
    def test_parseval(self, name):
        spec = scenario_to_spec(scenario_by_name(name))
        x = synthesize(spec).samples
        expected = sum(c.amplitude**2 for c in spec.components) / 2
        assert np.mean(x**2) == pytest.approx(expected, rel=0.05)


class TestNoiseVariance:
    def test_zero_db(self):
        assert snr_to_noise_variance([(50.0, 10.0)], 0.0) == 50.0

    def test_twenty_db(self):
        assert snr_to_noise_variance([(50.0, 10.0)], 20.0) == pytest.approx(0.5)

    def test_noiseless(self):
        assert snr_to_noise_variance([(50.0, 10.0)], None) == 0.0

    def test_zero_power_rejected(self):
        with pytest.raises(SignalSpecError):
            snr_to_noise_variance([(50.0, 0.0)], 10.0)


class TestScenarioToSpec:
    def test_defaults(self):
        spec = scenario_to_spec(scenario_by_name("misalignment"))
        assert [c.frequency for c in spec.components] == [50.0, 79.01, 137.03]
        assert [c.amplitude for c in spec.components] == [10.0, 1.0, 1.0]
        assert (spec.n_samples, spec.fs, spec.snr_db) == (1600, 1000.0, None)

    def test_zero_scale_drops_sidebands(self):
        spec = scenario_to_spec(scenario_by_name("misalignment"), sideband_scale=0.0)
        assert spec.components == (Tone(50.0, 10.0, 0.0),)

    def test_scale_sets_amplitude(self):
        spec = scenario_to_spec(scenario_by_name("eccentricity"), sideband_scale=0.2)
        assert [c.amplitude for c in spec.components[1:]] == [2.0, 2.0]

    def test_negative_scale_rejected(self):
        with pytest.raises(SignalSpecError):
            scenario_to_spec(scenario_by_name("eccentricity"), sideband_scale=-0.1)

    def test_sideband_above_nyquist_rejected(self):
        with pytest.raises(SignalSpecError):
            scenario_to_spec(scenario_by_name("inner-bearing"), fs=500.0)


class TestWindowFiles:
    def test_round_trip_is_lossless(self, tmp_path):
        spec = scenario_to_spec(scenario_by_name("broken-rotor"), snr_db=30.0, seed=42)
        w = synthesize(spec)
        path = tmp_path / "w.csv"
        write_window(path, w)
        back = read_window(path)
        assert back.fs == 1000.0
        assert back.samples.tobytes() == w.samples.tobytes()
        meta = read_meta(path)
        assert meta["seed"] == "42"
        assert float(meta["noise_variance"]) == spec.noise_variance

    def test_file_layout(self, tmp_path):
        path = tmp_path / "w.csv"
        write_window(path, SampleWindow(np.array([1.0, -0.5]), 1000.0), meta=False)
        assert path.read_text() == "index,amperes\n0,1\n1,-0.5\n"

    def test_missing_fs(self, tmp_path):
        path = tmp_path / "w.csv"
        write_window(path, SampleWindow(np.ones(4), 1000.0), meta=False)
        with pytest.raises(ValueError, match="sampling rate"):
            read_window(path)
        assert read_window(path, fs=250.0).fs == 250.0

    def test_bad_header(self, tmp_path):
        path = tmp_path / "w.csv"
        path.write_text("t,x\n0,1\n")
        with pytest.raises(ValueError, match="header"):
            read_window(path, fs=1000.0)

    def test_index_gap(self, tmp_path):
        path = tmp_path / "w.csv"
        path.write_text("index,amperes\n0,1\n2,1\n")
        with pytest.raises(ValueError, match="out of sequence"):
            read_window(path, fs=1000.0)
