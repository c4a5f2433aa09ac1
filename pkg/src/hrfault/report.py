"""Turn benchmark result CSVs into plot data, timing summaries and a ranking.

Ranking rules
-------------
* accuracy score of a method: mean of ``log10(pooled MSE)`` over all pooled
  rows whose SNR is at least the threshold (every row on an amplitude axis,
  or when no row reaches the threshold);
* accuracy class: quartiles of the scores across methods, best quartile
  ``very high``, then ``high``, ``medium``, ``low``;
* time class: tertiles of each method's median elapsed time (median over its
  cells), ``small``, ``medium``, ``high``;
* rank: by accuracy class, then time class, then score, then name.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass

import numpy as np

from .benchmark import RESULT_COLUMNS
from .errors import SchemaError

__all__ = [
    "ACCURACY_CLASSES",
    "TIME_CLASSES",
    "RankRow",
    "RankingTable",
    "read_results_csv",
    "plot_tables",
    "timing_summary",
    "ranking_table",
    "render_markdown",
    "write_plot_data",
]

ACCURACY_CLASSES = ("very high", "high", "medium", "low")
TIME_CLASSES = ("small", "medium", "high")


@dataclass(frozen=True)
class RankRow:
    method: str
    time_class: str
    accuracy_class: str
    rank: int
    score: float
    median_time: float
    failures: int


@dataclass(frozen=True)
class RankingTable:
    rows: tuple[RankRow, ...]

    def __post_init__(self):
        ranks = sorted(r.rank for r in self.rows)
        if ranks != list(range(1, len(self.rows) + 1)):
            raise ValueError(f"ranks {ranks} are not a permutation of 1..{len(self.rows)}")

    def by_rank(self) -> list[RankRow]:
        return sorted(self.rows, key=lambda r: r.rank)


def _num(text):
    return float(text)


def read_results_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != RESULT_COLUMNS:
            raise SchemaError(f"{path}: header does not match {','.join(RESULT_COLUMNS)}")
        rows = []
        for lineno, values in enumerate(reader, start=2):
            if not values:
                continue
            if len(values) != len(RESULT_COLUMNS):
                raise SchemaError(f"{path}:{lineno}: expected {len(RESULT_COLUMNS)} fields, got {len(values)}")
            row = dict(zip(RESULT_COLUMNS, values))
            try:
                for key in ("axis_value", "mse_hz2", "pooled_mse_hz2", "variance_hz2",
                            "mean_time_s", "median_time_s"):
                    row[key] = _num(row[key])
                row["failures"] = int(row["failures"])
                row["iterations"] = int(row["iterations"])
            except ValueError as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}") from exc
            rows.append(row)
    if not rows:
        raise SchemaError(f"{path}: no result rows")
    return rows


def _pooled(rows):
    return [r for r in rows if r["target_hz"] == "pooled"]


def _ordered(values):
    return sorted(set(values))


def _methods(rows):
    seen = []
    for r in rows:
        if r["method"] not in seen:
            seen.append(r["method"])
    return seen


def plot_tables(rows) -> dict[tuple[str, str, str], list[list]]:
    """Per (scenario, axis kind, quantity) a table ``[axis_value, m1, m2, ...]``.

    ``quantity`` is ``mse`` (pooled MSE) or ``variance``. The first row is the
    header.
    """
    pooled = _pooled(rows)
    methods = _methods(pooled)
    out = {}
    for scenario in _ordered(r["scenario"] for r in pooled):
        sub = [r for r in pooled if r["scenario"] == scenario]
        for kind in _ordered(r["axis_kind"] for r in sub):
            cells = {(r["method"], r["axis_value"]): r for r in sub if r["axis_kind"] == kind}
            axis = _ordered(v for _, v in cells)
            for quantity, key in (("mse", "pooled_mse_hz2"), ("variance", "variance_hz2")):
                table = [[kind] + methods]
                for v in axis:
                    table.append([v] + [cells[(m, v)][key] if (m, v) in cells else math.nan for m in methods])
                out[(scenario, kind, quantity)] = table
    return out


def timing_summary(rows) -> dict[str, dict[str, float]]:
    pooled = _pooled(rows)
    summary = {}
    for m in _methods(pooled):
        sub = [r for r in pooled if r["method"] == m]
        means = [r["mean_time_s"] for r in sub if not math.isnan(r["mean_time_s"])]
        medians = [r["median_time_s"] for r in sub if not math.isnan(r["median_time_s"])]
        summary[m] = {
            "mean_time_s": float(np.mean(means)) if means else math.nan,
            "median_time_s": float(np.median(medians)) if medians else math.nan,
            "failures": sum(r["failures"] for r in sub),
            "iterations": sum(r["iterations"] for r in sub),
        }
    return summary


def _classify(value, cuts, labels):
    for cut, label in zip(cuts, labels):
        if value <= cut:
            return label
    return labels[-1]


def ranking_table(rows, snr_threshold: float = 50.0) -> RankingTable:
    pooled = _pooled(rows)
    if not pooled:
        raise SchemaError("no pooled rows to rank")
    qualifying = [r for r in pooled if r["axis_kind"] != "snr" or r["axis_value"] >= snr_threshold]
    if not qualifying:
        qualifying = pooled
    methods = _methods(pooled)
    timing = timing_summary(rows)
    tiny = np.finfo(float).tiny
    scores = {}
    for m in methods:
        vals = [math.log10(max(r["pooled_mse_hz2"], tiny)) for r in qualifying if r["method"] == m]
        scores[m] = float(np.mean(vals)) if vals else math.inf
    finite_scores = [s for s in scores.values() if math.isfinite(s)]
    acc_cuts = np.quantile(finite_scores, [0.25, 0.5, 0.75]) if finite_scores else [math.inf] * 3
    times = {m: timing[m]["median_time_s"] for m in methods}
    finite_times = [t for t in times.values() if not math.isnan(t)]
    time_cuts = np.quantile(finite_times, [1 / 3, 2 / 3]) if finite_times else [math.inf] * 2

    staged = []
    for m in methods:
        acc = _classify(scores[m], acc_cuts, ACCURACY_CLASSES)
        t = times[m]
        tcls = TIME_CLASSES[-1] if math.isnan(t) else _classify(t, time_cuts, TIME_CLASSES)
        key = (ACCURACY_CLASSES.index(acc), TIME_CLASSES.index(tcls), scores[m], m)
        staged.append((key, m, acc, tcls))
    staged.sort()
    rows_out = tuple(
        RankRow(m, tcls, acc, rank, scores[m], times[m], timing[m]["failures"])
        for rank, (_, m, acc, tcls) in enumerate(staged, start=1)
    )
    return RankingTable(rows_out)


def _g(v) -> str:
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.4g}"
    return str(v)


def _markdown_table(table) -> list[str]:
    header, *body = table
    lines = ["| " + " | ".join(map(str, header)) + " |", "|" + "---|" * len(header)]
    for row in body:
        lines.append("| " + " | ".join(_g(v) for v in row) + " |")
    return lines


def render_markdown(rows, snr_threshold: float = 50.0) -> str:
    lines = ["# Benchmark report", ""]
    for (scenario, kind, quantity), table in plot_tables(rows).items():
        title = "pooled MSE (Hz^2)" if quantity == "mse" else "variance (Hz^2)"
        lines += [f"## {scenario}: {title} vs {kind}", ""] + _markdown_table(table) + [""]
    lines += ["## Timing", "", "| method | mean time (s) | median time (s) | failures | iterations |",
              "|---|---|---|---|---|"]
    for m, t in timing_summary(rows).items():
        lines.append(f"| {m} | {_g(t['mean_time_s'])} | {_g(t['median_time_s'])} | "
                     f"{t['failures']} | {t['iterations']} |")
    lines += ["", f"## Ranking (accuracy over SNR >= {snr_threshold:g} dB)", "",
              "| rank | method | accuracy | time | mean log10 MSE | median time (s) | failures |",
              "|---|---|---|---|---|---|---|"]
    for r in ranking_table(rows, snr_threshold).by_rank():
        lines.append(f"| {r.rank} | {r.method} | {r.accuracy_class} | {r.time_class} | "
                     f"{r.score:.3f} | {_g(r.median_time)} | {r.failures} |")
    return "\n".join(lines) + "\n"


def ranking_csv(rows, snr_threshold: float = 50.0) -> str:
    lines = ["rank,method,accuracy_class,time_class,score_log10_mse,median_time_s,failures"]
    for r in ranking_table(rows, snr_threshold).by_rank():
        lines.append(f"{r.rank},{r.method},{r.accuracy_class},{r.time_class},{r.score!r},{r.median_time!r},{r.failures}")
    return "\n".join(lines) + "\n"


def write_plot_data(rows, out_dir) -> list[str]:
    """Write one CSV per (scenario, axis, quantity); returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for (scenario, kind, quantity), table in plot_tables(rows).items():
        path = os.path.join(out_dir, f"{quantity}_{scenario}_{kind}.csv")
        with open(path, "w", newline="\n") as fh:
            for row in table:
                fh.write(",".join(repr(v) if isinstance(v, float) else str(v) for v in row) + "\n")
        paths.append(path)
    timing_path = os.path.join(out_dir, "timing.csv")
    with open(timing_path, "w", newline="\n") as fh:
        fh.write("method,mean_time_s,median_time_s,failures,iterations\n")
        for m, t in timing_summary(rows).items():
            fh.write(f"{m},{t['mean_time_s']!r},{t['median_time_s']!r},{t['failures']},{t['iterations']}\n")
    paths.append(timing_path)
    return paths
