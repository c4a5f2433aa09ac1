"""Command-line front end: ``synth``, ``estimate``, ``bench``, ``report``.

The output directory of ``bench`` can be set with ``--out-dir``, the
``HRFAULT_OUT_DIR`` environment variable, or the ``[output]`` section of the
config file, in that order of precedence.
"""

from __future__ import annotations

import argparse
import os
import sys

from .benchmark import run_sweep, write_estimate_log, write_metadata, write_results_csv
from .config import RunConfig, parse_config
from .errors import ConfigError, EstimationError, NumericalFailure, SchemaError
from .estimators import GRID_METHODS, METHODS, EstimatorConfig, estimate, pseudospectrum
from .faults import SCENARIO_NAMES, Tone, scenario_by_name
from .report import ranking_csv, read_results_csv, render_markdown, write_plot_data
from .subspace import CORR_METHODS
from .synthesis import SignalSpec, read_window, scenario_to_spec, synthesize, write_window

OUT_DIR_ENV = "HRFAULT_OUT_DIR"


def _snr(text):
    if text.lower() == "noiseless":
        return None
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"SNR must be a number of dB or 'noiseless', got {text!r}")


def _component(text):
    parts = text.split(":")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        values = []
    if len(values) not in (2, 3):
        raise argparse.ArgumentTypeError(f"component must be FREQ:AMP[:PHASE], got {text!r}")
    return Tone(*values)


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def cmd_synth(args) -> int:
    if args.scenario is None and not args.component:
        raise SystemExit("synth: give --scenario or at least one --component")
    if args.scenario is not None:
        try:
            scn = scenario_by_name(args.scenario)
        except KeyError:
            print(f"error: unknown scenario {args.scenario!r}; valid names: {', '.join(SCENARIO_NAMES)}",
                  file=sys.stderr)
            return 2
        spec = scenario_to_spec(scn, args.samples, args.fs, args.snr, args.seed, args.sideband_scale)
        if args.component:
            spec = SignalSpec(spec.components + tuple(args.component), spec.n_samples, spec.fs,
                              spec.snr_db, spec.seed)
    else:
        comps = tuple(c for c in args.component if c.amplitude > 0)
        spec = SignalSpec(comps, args.samples, args.fs, args.snr, args.seed)
    window = synthesize(spec)
    try:
        write_window(args.out, window)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return 2
    print(f"noise_variance={spec.noise_variance!r}")
    print(f"wrote {len(window)} samples to {args.out}")
    return 0


def cmd_estimate(args) -> int:
    try:
        window = read_window(args.input, fs=args.fs)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        cfg = EstimatorConfig(args.method, args.order, m_dim=args.subspace_dim,
                              grid_size=args.grid, corr_method=args.corr)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        result = estimate(window, cfg, amplitudes=args.amplitudes)
    except (EstimationError, NumericalFailure, ValueError) as exc:
        print(f"error: {args.method}: {exc}", file=sys.stderr)
        return 1
    print("frequencies_hz=" + " ".join(f"{f:.6f}" for f in result.frequencies))
    if result.amplitudes is not None:
        print("amplitudes_a=" + " ".join(f"{a:.6f}" for a in result.amplitudes))
    print(f"elapsed_s={result.elapsed:.6g}")
    if result.flags:
        print("flags=" + ",".join(result.flags))
    if args.dump_spectrum:
        if args.method not in GRID_METHODS:
            print(f"error: --dump-spectrum needs a grid method ({', '.join(GRID_METHODS)})", file=sys.stderr)
            return 2
        ps = pseudospectrum(window, cfg)
        with open(args.dump_spectrum, "w", newline="\n") as fh:
            fh.write("frequency_hz,pseudospectrum\n")
            for g, v in zip(ps.grid, ps.values):
                fh.write(f"{g * window.fs!r},{v!r}\n")
    return 0


def cmd_bench(args) -> int:
    try:
        cfg = parse_config(args.config) if args.config else RunConfig()
        if args.iterations is not None:
            cfg.iterations = args.iterations
        if args.axis is not None:
            cfg.axis = args.axis
            cfg.axis_values = None
        if args.parallel is not None:
            cfg.parallel = args.parallel
        if args.base_seed is not None:
            cfg.base_seed = args.base_seed
        plan = cfg.to_plan()
    except ConfigError as exc:
        print(f"error: {args.config or 'config'}: {exc}", file=sys.stderr)
        return 2
    out_dir = args.out_dir or os.environ.get(OUT_DIR_ENV) or cfg.out_dir
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create {out_dir}: {exc}", file=sys.stderr)
        return 2
    result = run_sweep(plan, workers=cfg.parallel)
    stem = os.path.join(out_dir, f"bench_{plan.axis_kind}")
    write_results_csv(result, stem + ".csv")
    effective = cfg.as_dict() | {"out_dir": out_dir}
    write_metadata(result, stem + ".json", extra={"effective_config": effective})
    if cfg.write_log:
        write_estimate_log(result, stem + "_log.csv")
    failures = sum(c.failures for c in result.cells)
    print(f"wrote {stem}.csv ({len(result.cells)} cells, {failures} estimator failures)")
    return 0


def cmd_report(args) -> int:
    try:
        rows = read_results_csv(args.input)
    except (OSError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.format == "markdown":
        text = render_markdown(rows, args.rank_snr_threshold)
    else:
        text = ranking_csv(rows, args.rank_snr_threshold)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.plot_dir:
        write_plot_data(rows, args.plot_dir)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hrfault", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a stator-current window")
    p.add_argument("--scenario", help=f"one of: {', '.join(SCENARIO_NAMES)}")
    p.add_argument("--component", action="append", type=_component, default=[],
                   metavar="FREQ:AMP[:PHASE]", help="explicit tone (repeatable)")
    p.add_argument("--snr", type=_snr, default=None, help="dB, or 'noiseless' (default)")
    p.add_argument("--samples", type=_positive_int, default=1600)
    p.add_argument("--fs", type=float, default=1000.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sideband-scale", type=float, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("estimate", help="estimate tone frequencies of a window file")
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--input", required=True)
    p.add_argument("--order", type=_positive_int, required=True, help="number of real tones P")
    p.add_argument("--subspace-dim", type=_positive_int, default=32)
    p.add_argument("--corr", choices=CORR_METHODS, default="covariance")
    p.add_argument("--grid", type=_positive_int, default=4096)
    p.add_argument("--fs", type=float, default=None, help="overrides the .meta sidecar")
    p.add_argument("--amplitudes", action="store_true")
    p.add_argument("--dump-spectrum", metavar="CSV")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("bench", help="run a Monte-Carlo benchmark plan")
    p.add_argument("--config")
    p.add_argument("--iterations", type=int)
    p.add_argument("--axis", choices=("snr", "amplitude"))
    p.add_argument("--out-dir")
    p.add_argument("--parallel", type=_positive_int)
    p.add_argument("--base-seed", type=int)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", help="tables, plot data and ranking from a result CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--format", choices=("markdown", "csv"), default="markdown")
    p.add_argument("--rank-snr-threshold", type=float, default=50.0)
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--plot-dir", help="directory for per-scenario plot-data CSVs")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
