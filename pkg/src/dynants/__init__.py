"""Ant colony optimization for the symmetric TSP with statistically
selected elite ants, plus the classic baselines and an experiment harness."""

from .classifiers import (ClassifierKind, Threshold, classify, make_threshold,
                          mean, median, mid_range)
from .colony import (ConfigurationError, Params, PheromoneField, TourRecord,
                     Variant, construct_tour, init_pheromone,
                     nearest_neighbor_length, transition_probabilities)
from .engine import (IterationStats, RunConfig, RunFailure, RunResult,
                     build_config, default_num_ants, expand_grid, run,
                     run_iteration, seeded_replicates, sweep)
from .estimator import AntColonyTSP
from .reporting import (QuartileSummary, SummaryRow, algorithm_label,
                        average_last_k, deviation_pct, elite_count_summary,
                        emit_report, five_number, summarize_runs,
                        summarize_traces, write_trace)
from .tsplib import (Instance, TsplibParseError, bundled_instances, distance,
                     known_optimum, load_instance, parse_instance, tour_length)

__version__ = "0.1.0"

__all__ = [
    "AntColonyTSP", "ClassifierKind", "ConfigurationError", "Instance",
    "IterationStats", "Params", "PheromoneField", "QuartileSummary",
    "RunConfig", "RunFailure", "RunResult", "SummaryRow", "Threshold",
    "TourRecord", "TsplibParseError", "Variant", "algorithm_label",
    "average_last_k", "build_config", "bundled_instances", "classify",
    "construct_tour", "default_num_ants", "deviation_pct", "distance",
    "elite_count_summary", "emit_report", "expand_grid", "five_number",
    "init_pheromone", "known_optimum", "load_instance", "make_threshold",
    "mean", "median", "mid_range", "nearest_neighbor_length",
    "parse_instance", "run", "run_iteration", "seeded_replicates",
    "summarize_runs", "summarize_traces", "sweep", "tour_length",
    "transition_probabilities", "write_trace",
]
