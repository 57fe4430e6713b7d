"""Measurement and presentation: deviation percentages, last-window
averages, elite-count summaries and the CSV/JSON/JSONL file formats."""

import json
from dataclasses import asdict, dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from .classifiers import ClassifierKind
from .colony import Variant
from .engine import RunResult

QUARTILE_NOTE = ("# quartiles use the lower/upper-median (Tukey hinge) "
                 "convention on the pooled per-iteration elite counts")


def deviation_pct(length: float, optimum: float) -> float:
    """Percentage above the known optimum; negative when below it."""
    if optimum is None or optimum <= 0:
        raise ValueError(f"optimum must be a positive length, got {optimum}")
    return 100.0 * (length - optimum) / optimum


def round_half_up(x: float, digits: int = 2) -> float:
    """Decimal rounding with ties away from zero, for report formatting."""
    q = Decimal(10) ** -digits
    return float(Decimal(repr(x)).quantize(q, rounding=ROUND_HALF_UP))


def average_last_k(iteration_bests, k: int = 50) -> float:
    """Mean of the last k per-iteration best lengths (whole trace if shorter)."""
    bests = list(iteration_bests)
    if not bests:
        raise ValueError("empty iteration-best trace")
    window = bests[-k:] if k < len(bests) else bests
    return sum(window) / len(window)


@dataclass(frozen=True)
class QuartileSummary:
    """Five-number summary of a pooled elite-count trace."""

    min: float
    q1: float
    median: float
    q3: float
    max: float


def _median(sorted_values) -> float:
    n = len(sorted_values)
    mid = n // 2
    if n % 2:
        return float(sorted_values[mid])
    return (sorted_values[mid - 1] + sorted_values[mid]) / 2


def five_number(values) -> QuartileSummary:
    """Min, Tukey hinges, median and max of a nonempty sample."""
    data = sorted(values)
    if not data:
        raise ValueError("five_number of an empty sample")
    n = len(data)
    half = (n + 1) // 2  # hinges include the middle element for odd n
    return QuartileSummary(
        min=float(data[0]),
        q1=_median(data[:half]),
        median=_median(data),
        q3=_median(data[n - half:]),
        max=float(data[-1]),
    )


def elite_count_summary(traces) -> tuple[float, QuartileSummary]:
    """Pooled mean and quartiles of elite counts across runs.

    ``traces`` is an iterable of per-run elite-count sequences; all
    iterations of all runs are pooled before summarizing.
    """
    pooled = [c for trace in traces for c in trace]
    if not pooled:
        raise ValueError("no elite counts to summarize")
    return sum(pooled) / len(pooled), five_number(pooled)


def algorithm_label(variant: Variant | str,
                    classifier: ClassifierKind | str | None = None) -> str:
    """Table-style label, e.g. DEAM, DRAMed_pun, MMAS+IB+PTS."""
    variant = Variant(variant)
    if variant is Variant.MMAS_IB_PTS:
        return "MMAS+IB+PTS"
    if not variant.dynamic:
        return variant.name
    suffix = {ClassifierKind.MRTS: "MR", ClassifierKind.MTS: "M",
              ClassifierKind.METS: "Med"}[ClassifierKind(classifier)]
    stem = "DRA" if variant.rank_based else "DEA"
    return f"{stem}{suffix}" + ("_pun" if variant.punished else "")


@dataclass
class SummaryRow:
    """One report line: a (dataset, algorithm) aggregate over seeded runs."""

    dataset: str
    algorithm: str
    best: float
    best_dev_pct: float | None
    avg: float
    avg_dev_pct: float | None
    mean_elite: float | None
    m: int
    seeds: int


def summarize_runs(results: list[RunResult], last_k: int = 50) -> SummaryRow:
    """Aggregate seeded replicates of one configuration into a SummaryRow."""
    if not results:
        raise ValueError("no results to summarize")
    first = results[0]
    label = algorithm_label(first.config.variant, first.config.classifier)
    datasets = {r.dataset for r in results}
    if len(datasets) != 1:
        raise ValueError(f"mixed datasets in one summary: {sorted(datasets)}")
    best = min(r.best_length for r in results)
    avg = sum(average_last_k(r.iteration_bests(), last_k)
              for r in results) / len(results)
    optimum = first.optimum
    mean_elite = None
    if Variant(first.config.variant).dynamic:
        mean_elite, _ = elite_count_summary(r.elite_counts() for r in results)
    return SummaryRow(
        dataset=first.dataset,
        algorithm=label,
        best=float(best),
        best_dev_pct=None if optimum is None else deviation_pct(best, optimum),
        avg=avg,
        avg_dev_pct=None if optimum is None else deviation_pct(avg, optimum),
        mean_elite=mean_elite,
        m=first.config.params.num_ants,
        seeds=len(results),
    )


CSV_HEADER = "dataset,algorithm,best,best_dev_pct,avg,avg_dev_pct,mean_elite,m,seeds"


def _fmt(value, digits) -> str:
    if value is None:
        return ""
    return f"{round_half_up(float(value), digits):.{digits}f}"


def render_rows_csv(rows: list[SummaryRow]) -> str:
    """Byte-stable CSV in the published-table style.

    Lengths carry one decimal, deviations and elite means two; unknown
    optima leave the deviation fields empty rather than fake zeros.
    """
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join([
            r.dataset,
            r.algorithm,
            _fmt(r.best, 1),
            _fmt(r.best_dev_pct, 2),
            _fmt(r.avg, 1),
            _fmt(r.avg_dev_pct, 2),
            _fmt(r.mean_elite, 2),
            str(r.m),
            str(r.seeds),
        ]))
    return "\n".join(lines) + "\n"


def render_rows_json(rows: list[SummaryRow]) -> str:
    """JSON array carrying unrounded values; round-trips exactly."""
    return json.dumps([asdict(r) for r in rows], indent=2) + "\n"


def emit_report(rows: list[SummaryRow], fmt: str = "csv",
                path: str | Path | None = None) -> str:
    if not rows:
        raise ValueError("no rows to emit")
    if fmt == "csv":
        text = render_rows_csv(rows)
    elif fmt == "json":
        text = render_rows_json(rows)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path is not None:
        Path(path).write_text(text)
    return text


def quartile_rows(groups) -> list[dict]:
    """Five-number summaries per (dataset, algorithm) group.

    ``groups`` maps (dataset, algorithm) to per-run elite-count traces.
    """
    out = []
    for (dataset, algorithm), traces in groups.items():
        _, q = elite_count_summary(traces)
        out.append({"dataset": dataset, "algorithm": algorithm,
                    "min": q.min, "q1": q.q1, "median": q.median,
                    "q3": q.q3, "max": q.max})
    return out


def render_quartiles_csv(rows: list[dict]) -> str:
    lines = [QUARTILE_NOTE, "dataset,algorithm,min,q1,median,q3,max"]
    for r in rows:
        lines.append(",".join([
            r["dataset"], r["algorithm"],
            *(f"{r[k]:g}" for k in ("min", "q1", "median", "q3", "max")),
        ]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# trace files: one JSON record per iteration, line-delimited, plus a meta
# sidecar carrying the run identity the records themselves do not repeat.

def write_trace(result: RunResult, path: str | Path):
    path = Path(path)
    with path.open("w") as fh:
        for s in result.stats:
            fh.write(json.dumps({
                "index": s.index,
                "best": s.best_length,
                "threshold": s.threshold_value,
                "elite_count": s.elite_count,
                "best_so_far": s.best_so_far,
            }) + "\n")
    p = result.config.params
    meta = {
        "dataset": result.dataset,
        "algorithm": algorithm_label(result.config.variant,
                                     result.config.classifier),
        "variant": Variant(result.config.variant).value,
        "classifier": (None if result.config.classifier is None
                       else ClassifierKind(result.config.classifier).value),
        "seed": result.config.seed,
        "m": p.num_ants,
        "params": {"alpha": p.alpha, "beta": p.beta, "rho": p.rho,
                   "q": p.q_deposit, "qstar": p.q_punish,
                   "iters": p.max_iterations},
        "optimum": result.optimum,
        "best_length": result.best_length,
        "best_perm": [int(c) for c in result.best_perm],
        "iterations": result.iterations,
        "termination": result.termination,
        "trace": path.name,
    }
    path.with_suffix(".meta.json").write_text(json.dumps(meta, indent=2) + "\n")


def read_trace(path: str | Path) -> list[dict]:
    records = []
    for line in Path(path).read_text().splitlines():
        if line.strip():
            records.append(json.loads(line))
    return records


def trace_paths(paths) -> list[Path]:
    """Expand files/directories into the trace files they contain."""
    out: list[Path] = []
    for p in map(Path, paths):
        if p.is_dir():
            out.extend(sorted(p.glob("*.jsonl")))
        else:
            out.append(p)
    if not out:
        raise FileNotFoundError(f"no trace files found under {list(paths)}")
    return out


def summarize_traces(paths, last_k: int = 50) -> list[SummaryRow]:
    """Recompute SummaryRows from saved traces and their meta sidecars.

    Runs group into one row per (dataset, algorithm, parameter point), so a
    parameter sweep keeps its points separate even under one algorithm label.
    """
    groups: dict[tuple[str, str, str], list[tuple[dict, list[dict]]]] = {}
    for trace_file in trace_paths(paths):
        meta = json.loads(trace_file.with_suffix(".meta.json").read_text())
        records = read_trace(trace_file)
        key = (meta["dataset"], meta["algorithm"],
               json.dumps(meta.get("params", {}), sort_keys=True))
        groups.setdefault(key, []).append((meta, records))
    rows = []
    for (dataset, algorithm, _), runs in sorted(groups.items()):
        bests = [min(rec["best"] for rec in records) for _, records in runs]
        avg = sum(average_last_k([rec["best"] for rec in records], last_k)
                  for _, records in runs) / len(runs)
        optimum = runs[0][0].get("optimum")
        dynamic = Variant(runs[0][0]["variant"]).dynamic
        mean_elite = None
        if dynamic:
            mean_elite, _ = elite_count_summary(
                [rec["elite_count"] for rec in records] for _, records in runs)
        rows.append(SummaryRow(
            dataset=dataset,
            algorithm=algorithm,
            best=float(min(bests)),
            best_dev_pct=(None if optimum is None
                          else deviation_pct(min(bests), optimum)),
            avg=avg,
            avg_dev_pct=(None if optimum is None
                         else deviation_pct(avg, optimum)),
            mean_elite=mean_elite,
            m=runs[0][0]["m"],
            seeds=len(runs),
        ))
    return rows


def quartiles_from_traces(paths) -> list[dict]:
    groups: dict[tuple[str, str], list[list[int]]] = {}
    for trace_file in trace_paths(paths):
        meta = json.loads(trace_file.with_suffix(".meta.json").read_text())
        records = read_trace(trace_file)
        groups.setdefault((meta["dataset"], meta["algorithm"]), []).append(
            [rec["elite_count"] for rec in records])
    return quartile_rows(dict(sorted(groups.items())))
