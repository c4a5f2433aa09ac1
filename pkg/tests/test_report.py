import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hrfault.benchmark import RESULT_COLUMNS, SweepPlan, run_sweep, write_results_csv
from hrfault.errors import SchemaError
from hrfault.estimators import EstimatorConfig
from hrfault.faults import scenario_by_name
from hrfault.report import (
    ACCURACY_CLASSES,
    TIME_CLASSES,
    RankingTable,
    RankRow,
    plot_tables,
    ranking_csv,
    ranking_table,
    read_results_csv,
    render_markdown,
    timing_summary,
    write_plot_data,
)


def row(method, axis_value, mse, time=1e-3, scenario="broken-rotor", kind="snr", failures=0):
    return {
        "scenario": scenario, "method": method, "axis_kind": kind, "axis_value": float(axis_value),
        "target_hz": "pooled", "mse_hz2": mse, "pooled_mse_hz2": mse, "variance_hz2": mse / 2,
        "mean_time_s": time, "median_time_s": time, "failures": failures, "iterations": 10,
    }


@pytest.fixture(scope="module")
def result_csv(tmp_path_factory):
    plan = SweepPlan(
        scenarios=[scenario_by_name("broken-rotor"), scenario_by_name("eccentricity")],
        methods=[EstimatorConfig(m, 3) for m in ("prony", "esprit", "fft-music")],
        axis_values=(10.0, 60.0),
        iterations=3,
    )
    path = tmp_path_factory.mktemp("rep") / "bench_snr.csv"
    write_results_csv(run_sweep(plan), path)
    return path


class TestReadResults:
    def test_reads_rows(self, result_csv):
        rows = read_results_csv(result_csv)
        assert len(rows) == 2 * 3 * 2 * 4
        assert isinstance(rows[0]["pooled_mse_hz2"], float)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "e.csv"
        path.write_text("")
        with pytest.raises(SchemaError):
            read_results_csv(path)

    def test_header_only(self, tmp_path):
        path = tmp_path / "h.csv"
        path.write_text(",".join(RESULT_COLUMNS) + "\n")
        with pytest.raises(SchemaError, match="no result rows"):
            read_results_csv(path)

    def test_wrong_header(self, tmp_path):
        path = tmp_path / "w.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(SchemaError):
            read_results_csv(path)

    def test_bad_number(self, tmp_path):
        path = tmp_path / "b.csv"
        path.write_text(",".join(RESULT_COLUMNS) + "\n" + "s,m,snr,x,pooled,1,1,1,1,1,0,2\n")
        with pytest.raises(SchemaError, match=":2:"):
            read_results_csv(path)


class TestRanking:
    def test_single_method(self):
        table = ranking_table([row("esprit", 60, 1e-9), row("esprit", 0, 1.0)])
        assert [(r.method, r.rank) for r in table.rows] == [("esprit", 1)]

    def test_accuracy_before_time(self):
        rows = [row("fast-bad", 60, 1.0, time=1e-4), row("slow-good", 60, 1e-10, time=1e-1),
                row("mid", 60, 1e-5, time=1e-2), row("other", 60, 1e-3, time=1e-3)]
        table = ranking_table(rows)
        order = [r.method for r in table.by_rank()]
        assert order[0] == "slow-good" and order[-1] == "fast-bad"
        classes = {r.method: r.accuracy_class for r in table.rows}
        assert classes["slow-good"] == "very high" and classes["fast-bad"] == "low"

    def test_threshold_filters_rows(self):
        rows = [row("a", 0, 1e-12), row("a", 60, 1.0), row("b", 0, 1.0), row("b", 60, 1e-6)]
        assert ranking_table(rows, 50.0).by_rank()[0].method == "b"
        assert ranking_table(rows, 0.0).by_rank()[0].method == "a"

    def test_zero_mse_is_finite(self):
        table = ranking_table([row("a", 60, 0.0), row("b", 60, 1.0)])
        assert table.by_rank()[0].method == "a"
        assert math.isfinite(table.by_rank()[0].score)

    def test_permutation_invariant_enforced(self):
        r = RankRow("a", "small", "high", 2, 0.0, 0.0, 0)
        with pytest.raises(ValueError):
            RankingTable((r,))

    @settings(max_examples=60, deadline=None)
    @given(st.lists(
        st.tuples(st.floats(1e-14, 1e5), st.floats(1e-6, 1.0), st.sampled_from([0.0, 50.0, 80.0])),
        min_size=1, max_size=30,
    ))
    def test_ranks_are_permutation(self, cells):
        rows = [row(f"m{i % 7}", v, mse, t) for i, (mse, t, v) in enumerate(cells)]
        table = ranking_table(rows)
        methods = {r["method"] for r in rows}
        assert sorted(r.rank for r in table.rows) == list(range(1, len(methods) + 1))
        assert all(r.accuracy_class in ACCURACY_CLASSES and r.time_class in TIME_CLASSES for r in table.rows)


class TestRender:
    def test_markdown_deterministic(self, result_csv):
        a = render_markdown(read_results_csv(result_csv))
        b = render_markdown(read_results_csv(result_csv))
        assert a == b
        assert "## Ranking" in a and "## Timing" in a
        assert "## eccentricity: pooled MSE (Hz^2) vs snr" in a

    def test_ranking_csv(self, result_csv):
        lines = ranking_csv(read_results_csv(result_csv)).splitlines()
        assert lines[0].startswith("rank,method,")
        assert [ln.split(",")[0] for ln in lines[1:]] == ["1", "2", "3"]

    def test_plot_tables(self, result_csv):
        tables = plot_tables(read_results_csv(result_csv))
        mse = tables[("broken-rotor", "snr", "mse")]
        assert mse[0] == ["snr", "prony", "esprit", "fft-music"]
        assert [r[0] for r in mse[1:]] == [10.0, 60.0]

    def test_timing_summary(self, result_csv):
        summary = timing_summary(read_results_csv(result_csv))
        assert set(summary) == {"prony", "esprit", "fft-music"}
        assert summary["esprit"]["iterations"] == 4 * 3

    def test_plot_files(self, result_csv, tmp_path):
        paths = write_plot_data(read_results_csv(result_csv), tmp_path)
        names = sorted(p.rsplit("/", 1)[-1] for p in paths)
        assert "mse_broken-rotor_snr.csv" in names
        assert "variance_eccentricity_snr.csv" in names
        assert "timing.csv" in names
        text = (tmp_path / "mse_broken-rotor_snr.csv").read_text().splitlines()
        assert text[0] == "snr,prony,esprit,fft-music"
        assert len(text) == 3
