"""Monte-Carlo benchmark of the estimators over fault scenarios.

A sweep walks a grid of (scenario, axis point, iteration). For every grid
point one noisy window is synthesized and handed to *every* method, so the
methods are compared on identical noise realizations. Per cell
(scenario x method x axis point) the harness records per-target MSE, the
pooled MSE (mean over targets), the dispersion of the matched estimates, and
timing.

Seeds
-----
The window seed for a grid point is::

    SeedSequence([base_seed, crc32(scenario name), axis code, axis index, iteration])
        .generate_state(1, uint64)[0]

with axis code 0 for ``snr`` and 1 for ``amplitude``. The method never enters
the seed.

Misses
------
A truth frequency without an estimate within ``fs/4`` counts as missed and
contributes ``(fs/4)**2`` to its MSE. Misses are excluded from the variance.
An estimator failure misses every target of that iteration.
"""

from __future__ import annotations

import json
import math
import platform
import statistics
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import __version__
from .errors import EstimationError, NumericalFailure
from .estimators import METHODS, EstimatorConfig, estimate
from .faults import FaultScenario, canonical_scenarios
from .synthesis import DEFAULT_FS, DEFAULT_N_SAMPLES, scenario_to_spec, synthesize

__all__ = [
    "AXIS_KINDS",
    "SweepPlan",
    "CellResult",
    "IterationRecord",
    "SweepResult",
    "ErrorStats",
    "derive_seed",
    "miss_penalty",
    "match_to_truth",
    "mse_and_variance",
    "run_sweep",
    "default_reference_plan",
    "RESULT_COLUMNS",
    "write_results_csv",
    "write_metadata",
    "write_estimate_log",
    "read_estimate_log",
]

AXIS_KINDS = ("snr", "amplitude")
_AXIS_CODE = {"snr": 0, "amplitude": 1}

RESULT_COLUMNS = (
    "scenario", "method", "axis_kind", "axis_value", "target_hz", "mse_hz2",
    "pooled_mse_hz2", "variance_hz2", "mean_time_s", "median_time_s",
    "failures", "iterations",
)
LOG_COLUMNS = (
    "scenario", "method", "axis_kind", "axis_value", "axis_index", "iteration",
    "seed", "status", "elapsed_s", "estimates_hz", "truth_hz", "matched_hz",
)


@dataclass
class SweepPlan:
    """Benchmark grid.

    ``methods`` carry tuning only; the model order is set per window to the
    number of non-zero components. On the ``snr`` axis sidebands use
    ``sideband_scale * a0``; on the ``amplitude`` axis the SNR is fixed at
    ``snr_db``.
    """

    scenarios: list[FaultScenario]
    methods: list[EstimatorConfig]
    axis_kind: str = "snr"
    axis_values: tuple[float, ...] = tuple(float(v) for v in range(0, 101, 5))
    iterations: int = 200
    base_seed: int = 0
    n_samples: int = DEFAULT_N_SAMPLES
    fs: float = DEFAULT_FS
    sideband_scale: float = 0.1
    snr_db: float = 30.0

    def __post_init__(self):
        self.axis_values = tuple(float(v) for v in self.axis_values)
        if self.axis_kind not in AXIS_KINDS:
            raise ValueError(f"axis must be one of {AXIS_KINDS}, got {self.axis_kind!r}")
        if not self.scenarios or not self.methods or not self.axis_values:
            raise ValueError("plan needs at least one scenario, method and axis value")
        lo, hi = (0.0, 100.0) if self.axis_kind == "snr" else (0.0, 0.2)
        for v in self.axis_values:
            if not lo <= v <= hi + 1e-12:
                raise ValueError(f"{self.axis_kind} axis value {v} outside [{lo}, {hi}]")
        if self.iterations < 2:
            raise ValueError("iterations must be at least 2")
        if not 0 <= self.base_seed < 2**64:
            raise ValueError("base_seed must be an unsigned 64-bit integer")
        names = [m.method for m in self.methods]
        if len(set(names)) != len(names):
            raise ValueError("each method may appear only once in a plan")

    def window_spec(self, scn: FaultScenario, axis_index: int, iteration: int):
        value = self.axis_values[axis_index]
        seed = derive_seed(self.base_seed, scn.name, self.axis_kind, axis_index, iteration)
        if self.axis_kind == "snr":
            return scenario_to_spec(scn, self.n_samples, self.fs, value, seed, self.sideband_scale)
        return scenario_to_spec(scn, self.n_samples, self.fs, self.snr_db, seed, value)

    def snapshot(self) -> dict:
        return {
            "scenarios": [
                {
                    "name": s.name,
                    "kind": s.kind.value,
                    "fundamental": list(s.fundamental),
                    "sidebands": [list(t) for t in s.sidebands],
                    "machine": asdict(s.machine),
                }
                for s in self.scenarios
            ],
            "methods": [asdict(m) | {"p_real": "per-window component count"} for m in self.methods],
            "axis_kind": self.axis_kind,
            "axis_values": list(self.axis_values),
            "iterations": self.iterations,
            "base_seed": self.base_seed,
            "n_samples": self.n_samples,
            "fs": self.fs,
            "sideband_scale": self.sideband_scale,
            "snr_db": self.snr_db,
        }


@dataclass
class IterationRecord:
    scenario: str
    method: str
    axis_value: float
    axis_index: int
    iteration: int
    seed: int
    status: str
    elapsed: float
    estimates: tuple[float, ...]
    truth: tuple[float, ...]
    matched: tuple[Optional[float], ...]


@dataclass
class CellResult:
    scenario: str
    method: str
    axis_kind: str
    axis_value: float
    targets: tuple[float, ...]
    per_target_mse: tuple[float, ...]
    pooled_mse: float
    per_target_variance: tuple[float, ...]
    variance: float
    mean_elapsed: float
    median_elapsed: float
    failures: int
    iterations: int


@dataclass
class SweepResult:
    plan: SweepPlan
    cells: list[CellResult]
    environment: str
    log: list[IterationRecord] = field(default_factory=list, repr=False)
    parallel: bool = False

    def cell(self, scenario, method, axis_value) -> CellResult:
        for c in self.cells:
            if c.scenario == scenario and c.method == method and c.axis_value == axis_value:
                return c
        raise KeyError((scenario, method, axis_value))


class ErrorStats(NamedTuple):
    per_target_mse: tuple[float, ...]
    pooled_mse: float
    variance: float
    per_target_variance: tuple[float, ...]


def derive_seed(base_seed: int, scenario: str, axis_kind: str, axis_index: int, iteration: int) -> int:
    entropy = [int(base_seed), zlib.crc32(scenario.encode()), _AXIS_CODE[axis_kind], int(axis_index), int(iteration)]
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def miss_penalty(fs: float) -> float:
    return (fs / 4.0) ** 2


def match_to_truth(estimated: Sequence[float], truth: Sequence[float], fs: float = DEFAULT_FS):
    """Pair estimates with truth frequencies, globally closest pair first.

    Returns ``[(truth_index, estimate_or_None), ...]`` in truth order. A truth
    is missed (``None``) when no estimate is left for it or the closest one
    is farther than ``fs/4``.
    """
    if len(truth) == 0:
        raise ValueError("truth must be non-empty")
    limit = fs / 4.0
    pairs = sorted(
        (abs(e - t), i, j) for i, t in enumerate(truth) for j, e in enumerate(estimated)
    )
    matched: dict[int, float] = {}
    used = set()
    for dist, i, j in pairs:
        if i in matched or j in used or dist > limit:
            continue
        matched[i] = estimated[j]
        used.add(j)
    return [(i, matched.get(i)) for i in range(len(truth))]


def mse_and_variance(per_iteration_estimates, truth: Sequence[float], fs: float = DEFAULT_FS) -> ErrorStats:
    """Error statistics over iterations.

    Parameters
    ----------
    per_iteration_estimates : sequence of sequences
        One row per iteration, aligned with ``truth``; ``None`` marks a miss.
    truth : sequence of float
        True frequencies in Hz.

    Returns
    -------
    ErrorStats
        Per-target MSE (misses cost ``(fs/4)**2``), their mean, and the mean
        over targets of the N-denominator variance of the detections. A
        target that was never detected has NaN variance and is left out of
        the mean.
    """
    rows = [list(r) for r in per_iteration_estimates]
    n = len(rows)
    if n < 2:
        raise ValueError("need at least two iterations")
    penalty = miss_penalty(fs)
    mses, variances = [], []
    for k, t in enumerate(truth):
        hits = [r[k] for r in rows if r[k] is not None]
        sq = [(e - t) ** 2 for e in hits] + [penalty] * (n - len(hits))
        mses.append(math.fsum(sq) / n)
        if hits:
            mean = math.fsum(hits) / len(hits)
            variances.append(math.fsum((e - mean) ** 2 for e in hits) / len(hits))
        else:
            variances.append(math.nan)
    pooled = math.fsum(mses) / len(mses)
    defined = [v for v in variances if not math.isnan(v)]
    variance = math.fsum(defined) / len(defined) if defined else math.nan
    return ErrorStats(tuple(mses), pooled, variance, tuple(variances))


def _run_unit(plan: SweepPlan, s_idx: int, a_idx: int) -> list[IterationRecord]:
    """All iterations and methods of one (scenario, axis point)."""
    scn = plan.scenarios[s_idx]
    records = []
    for it in range(plan.iterations):
        spec = plan.window_spec(scn, a_idx, it)
        window = synthesize(spec)
        truth = tuple(sorted(c.frequency for c in spec.components))
        for base in plan.methods:
            cfg = base.replace(p_real=len(truth))
            try:
                est = estimate(window, cfg)
            except (EstimationError, NumericalFailure) as exc:
                status, elapsed, freqs = f"failed:{type(exc).__name__}", math.nan, ()
            else:
                status, elapsed, freqs = "ok", est.elapsed, tuple(float(f) for f in est.frequencies)
            matched = tuple(e for _, e in match_to_truth(freqs, truth, plan.fs))
            records.append(IterationRecord(
                scn.name, base.method, plan.axis_values[a_idx], a_idx, it,
                spec.seed, status, elapsed, freqs, truth, matched,
            ))
    return records


def _aggregate(plan: SweepPlan, records: list[IterationRecord]) -> CellResult:
    first = records[0]
    stats = mse_and_variance([r.matched for r in records], first.truth, plan.fs)
    times = [r.elapsed for r in records if r.status == "ok"]
    return CellResult(
        scenario=first.scenario,
        method=first.method,
        axis_kind=plan.axis_kind,
        axis_value=first.axis_value,
        targets=first.truth,
        per_target_mse=stats.per_target_mse,
        pooled_mse=stats.pooled_mse,
        per_target_variance=stats.per_target_variance,
        variance=stats.variance,
        mean_elapsed=statistics.fmean(times) if times else math.nan,
        median_elapsed=statistics.median(times) if times else math.nan,
        failures=sum(r.status != "ok" for r in records),
        iterations=len(records),
    )


def host_description() -> str:
    return (
        f"{platform.platform()}; {platform.machine()}; {platform.processor() or 'unknown cpu'}; "
        f"python {platform.python_version()}; numpy {np.__version__}"
    )


def run_sweep(plan: SweepPlan, workers: int = 1) -> SweepResult:
    """Run every cell of ``plan``.

    ``workers > 1`` spreads (scenario, axis point) units over processes.
    Results are reassembled in plan order, so only the timing columns can
    differ from a sequential run; such runs are flagged ``parallel``.
    """
    units = [(s, a) for s in range(len(plan.scenarios)) for a in range(len(plan.axis_values))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_unit, [plan] * len(units), *zip(*units)))
    else:
        chunks = [_run_unit(plan, s, a) for s, a in units]

    log: list[IterationRecord] = []
    cells: list[CellResult] = []
    for chunk in chunks:
        log.extend(chunk)
    # cell order: scenario, method, axis point
    for s_idx, scn in enumerate(plan.scenarios):
        for base in plan.methods:
            for a_idx in range(len(plan.axis_values)):
                recs = [
                    r for r in chunks[s_idx * len(plan.axis_values) + a_idx]
                    if r.method == base.method
                ]
                cells.append(_aggregate(plan, recs))
    return SweepResult(plan, cells, host_description(), log, parallel=workers > 1)


def default_reference_plan(axis: str = "snr") -> SweepPlan:
    """The reference grid: 4 scenarios, all 7 methods, 200 iterations, n=1600, fs=1000 Hz.

    ``axis="snr"`` sweeps 0..100 dB in 5 dB steps with 1 A sidebands;
    ``axis="amplitude"`` sweeps the sideband scale 0..0.2 in 0.01 steps at 30 dB.
    """
    methods = [EstimatorConfig(m, 3) for m in METHODS]
    common = dict(scenarios=canonical_scenarios(), methods=methods, iterations=200,
                  n_samples=DEFAULT_N_SAMPLES, fs=DEFAULT_FS)
    if axis == "snr":
        return SweepPlan(axis_kind="snr", axis_values=tuple(float(v) for v in range(0, 101, 5)),
                         sideband_scale=0.1, **common)
    if axis == "amplitude":
        return SweepPlan(axis_kind="amplitude", axis_values=tuple(round(0.01 * i, 2) for i in range(21)),
                         snr_db=30.0, **common)
    raise ValueError(f"axis must be one of {AXIS_KINDS}, got {axis!r}")


# --- output files -------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_results_csv(result: SweepResult, path) -> None:
    """One row per (cell, target) plus a ``target_hz=pooled`` row per cell."""
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(RESULT_COLUMNS) + "\n")
        for c in result.cells:
            tail = [_fmt(c.mean_elapsed), _fmt(c.median_elapsed), str(c.failures), str(c.iterations)]
            head = [c.scenario, c.method, c.axis_kind, _fmt(c.axis_value)]
            for t, mse, var in zip(c.targets, c.per_target_mse, c.per_target_variance):
                fh.write(",".join(head + [_fmt(float(t)), _fmt(mse), _fmt(c.pooled_mse), _fmt(var)] + tail) + "\n")
            fh.write(",".join(head + ["pooled", _fmt(c.pooled_mse), _fmt(c.pooled_mse), _fmt(c.variance)] + tail) + "\n")


def metadata(result: SweepResult) -> dict:
    plan = result.plan
    return {
        "package": f"hrfault {__version__}",
        "plan": plan.snapshot(),
        "seed_scheme": "SeedSequence([base_seed, crc32(scenario), axis_code(snr=0, amplitude=1), "
                       "axis_index, iteration]).generate_state(1, uint64)[0]; shared by all methods",
        "rng": "numpy PCG64, Generator.standard_normal",
        "snr_definition": "noise variance = sum(a_k^2)/2 / 10^(snr_db/10)",
        "miss_penalty_hz2": miss_penalty(plan.fs),
        "miss_rule": "greedy closest-pair matching; unmatched or farther than fs/4 is missed",
        "pooled_mse": "mean over targets of per-target MSE",
        "variance": "mean over targets of N-denominator variance of detections (misses excluded)",
        "estimators": {m.method: {"m_dim": m.m_dim, "corr_method": m.corr_method,
                                  "grid_size": m.grid_size} for m in plan.methods},
        "timing": "time.perf_counter around each estimator call; synthesis excluded",
        "parallel": result.parallel,
        "environment": result.environment,
    }


def write_metadata(result: SweepResult, path, extra: Optional[dict] = None) -> None:
    meta = metadata(result)
    if extra:
        meta.update(extra)
    with open(path, "w", newline="\n") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _join(values) -> str:
    return " ".join("missed" if v is None else repr(float(v)) for v in values)


def write_estimate_log(result: SweepResult, path) -> None:
    """Per-iteration raw estimates, one row per (cell, iteration)."""
    kind = result.plan.axis_kind
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(LOG_COLUMNS) + "\n")
        for r in result.log:
            fh.write(",".join([
                r.scenario, r.method, kind, repr(r.axis_value), str(r.axis_index), str(r.iteration),
                str(r.seed), r.status, repr(r.elapsed), _join(r.estimates), _join(r.truth), _join(r.matched),
            ]) + "\n")


def read_estimate_log(path) -> list[dict]:
    def split(field):
        return [None if v == "missed" else float(v) for v in field.split()]

    rows = []
    with open(path) as fh:
        header = fh.readline().rstrip("\n").split(",")
        if tuple(header) != LOG_COLUMNS:
            raise ValueError(f"{path}: not an estimate log")
        for line in fh:
            values = dict(zip(LOG_COLUMNS, line.rstrip("\n").split(",")))
            for key in ("estimates_hz", "truth_hz", "matched_hz"):
                values[key] = split(values[key])
            values["axis_value"] = float(values["axis_value"])
            values["iteration"] = int(values["iteration"])
            rows.append(values)
    return rows
