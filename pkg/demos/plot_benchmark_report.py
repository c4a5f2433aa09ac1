"""
Monte-Carlo benchmark and ranking
=================================

The harness synthesizes many noisy windows per (scenario, SNR) point, feeds
the identical window to every estimator, matches estimates to the true tones
and aggregates MSE, variance and timing. The report then bins methods into
accuracy and time classes and ranks them.

This is a reduced grid (20 iterations, 6 SNR points); ``hrfault bench`` runs
the full one.
"""

import os
import tempfile

from hrfault import METHODS, EstimatorConfig, SweepPlan, canonical_scenarios, run_sweep
from hrfault.benchmark import write_results_csv
from hrfault.report import read_results_csv, render_markdown

plan = SweepPlan(
    scenarios=canonical_scenarios(),
    methods=[EstimatorConfig(m, 3) for m in METHODS],
    axis_kind="snr",
    axis_values=(0, 20, 40, 60, 80, 100),
    iterations=20,
    base_seed=1,
)
result = run_sweep(plan)

# Pooled MSE of the broken-rotor scenario: the high-resolution methods keep
# improving with SNR while Prony and Pisarenko stall.
print("pooled MSE (Hz^2), broken-rotor")
print("SNR  " + "".join(f"{m:>12s}" for m in METHODS))
for snr in plan.axis_values:
    cells = [result.cell("broken-rotor", m, snr).pooled_mse for m in METHODS]
    print(f"{snr:3.0f}  " + "".join(f"{v:12.3g}" for v in cells))

# Results go through the same CSV the CLI writes, then into the report.
with tempfile.TemporaryDirectory() as tmp:
    path = os.path.join(tmp, "bench_snr.csv")
    write_results_csv(result, path)
    report = render_markdown(read_results_csv(path))
print(report[report.index("## Timing"):])
