"""Command-line harness: run, sweep, report and quartiles subcommands."""

import argparse
import json
import sys
from pathlib import Path

from . import reporting
from .colony import ConfigurationError, Variant
from .engine import (RunFailure, build_config, expand_grid,
                     seeded_replicates, sweep)
from .tsplib import TsplibParseError

VARIANT_CHOICES = [v.value for v in Variant]
CLASSIFIER_CHOICES = ["mrts", "mts", "mets"]


def _add_config_flags(p: argparse.ArgumentParser):
    p.add_argument("--instance", help="TSPLIB file path or bundled name")
    p.add_argument("--variant", choices=VARIANT_CHOICES, default=None)
    p.add_argument("--classifier", choices=CLASSIFIER_CHOICES, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--qstar", type=float, default=None)
    p.add_argument("--ants", type=int, default=None)
    p.add_argument("--iters", type=int, default=None)
    p.add_argument("--stop-at-optimum", action="store_true")


def _add_shared_flags(p: argparse.ArgumentParser):
    p.add_argument("--seeds", type=int, default=1,
                   help="independent replicates per configuration")
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("--out", help="write the report here as well as stdout")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--trace", help="directory for per-run trace files")
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel worker processes for independent runs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynants",
        description="Ant colony TSP solver with statistically selected "
                    "elite ants")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="solve one configuration")
    _add_config_flags(p_run)
    _add_shared_flags(p_run)

    p_sweep = sub.add_parser("sweep", help="run a parameter grid from a file")
    p_sweep.add_argument("grid", help="JSON file of flag-name -> value/list")
    _add_shared_flags(p_sweep)

    p_report = sub.add_parser("report",
                              help="recompute summaries from saved traces")
    p_report.add_argument("traces", nargs="+",
                          help="trace files or directories")
    p_report.add_argument("--out")
    p_report.add_argument("--format", choices=["csv", "json"], default="csv")

    p_quart = sub.add_parser("quartiles",
                             help="five-number elite-count summaries")
    p_quart.add_argument("traces", nargs="+")
    p_quart.add_argument("--out")
    p_quart.add_argument("--format", choices=["csv", "json"], default="csv")
    return parser


def _write_traces(results, trace_dir: str):
    out = Path(trace_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, result in enumerate(results):
        if isinstance(result, RunFailure):
            continue
        label = reporting.algorithm_label(result.config.variant,
                                          result.config.classifier)
        name = f"run{i:04d}_{label}_{result.dataset}_seed{result.config.seed}"
        reporting.write_trace(result, out / f"{name}.jsonl")


def _group_key(config):
    p = config.params
    return (config.instance, Variant(config.variant).value,
            None if config.classifier is None else str(config.classifier),
            p.alpha, p.beta, p.rho, p.q_deposit, p.q_punish, p.num_ants,
            p.max_iterations)


def _summarize_grouped(results) -> list[reporting.SummaryRow]:
    groups: dict[tuple, list] = {}
    for result in results:
        if isinstance(result, RunFailure):
            continue
        groups.setdefault(_group_key(result.config), []).append(result)
    return [reporting.summarize_runs(group) for group in groups.values()]


def _emit(rows, fmt: str, out: str | None) -> None:
    text = reporting.emit_report(rows, fmt=fmt, path=out)
    sys.stdout.write(text)


def _report_failures(results) -> int:
    failures = [r for r in results if isinstance(r, RunFailure)]
    for f in failures:
        print(f"run failed ({f.config.instance}, seed {f.config.seed}): "
              f"{f.error}", file=sys.stderr)
    return len(failures)


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except (ConfigurationError, TsplibParseError, FileNotFoundError,
            ValueError) as exc:
        print(parser.format_usage(), end="", file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    if args.command == "run":
        if not args.instance:
            raise ConfigurationError("run requires --instance")
        config = build_config(
            instance=args.instance, variant=args.variant,
            classifier=args.classifier, alpha=args.alpha, beta=args.beta,
            rho=args.rho, q=args.q, qstar=args.qstar, ants=args.ants,
            iters=args.iters, stop_at_optimum=args.stop_at_optimum)
        configs = seeded_replicates(config, args.seeds, args.seed_base)
        results = sweep(configs, n_jobs=args.jobs)
        failed = _report_failures(results)
        if args.trace:
            _write_traces(results, args.trace)
        ok = [r for r in results if not isinstance(r, RunFailure)]
        if ok:
            _emit(_summarize_grouped(ok), args.format, args.out)
        return 1 if failed else 0

    if args.command == "sweep":
        grid = json.loads(Path(args.grid).read_text())
        configs = expand_grid(grid, seeds=args.seeds, seed_base=args.seed_base)
        results = sweep(configs, n_jobs=args.jobs)
        failed = _report_failures(results)
        if args.trace:
            _write_traces(results, args.trace)
        ok = [r for r in results if not isinstance(r, RunFailure)]
        if ok:
            _emit(_summarize_grouped(ok), args.format, args.out)
        return 1 if failed else 0

    if args.command == "report":
        rows = reporting.summarize_traces(args.traces)
        _emit(rows, args.format, args.out)
        return 0

    if args.command == "quartiles":
        rows = reporting.quartiles_from_traces(args.traces)
        if args.format == "csv":
            text = reporting.render_quartiles_csv(rows)
        else:
            text = json.dumps(rows, indent=2) + "\n"
        if args.out:
            Path(args.out).write_text(text)
        sys.stdout.write(text)
        return 0

    raise ConfigurationError(f"unknown command {args.command!r}")


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
