"""Run orchestration: the iteration loop, termination, seeding and the
multi-run experiment protocol."""

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from . import updaters
from .classifiers import ClassifierKind, classify, make_threshold
from .colony import (ConfigurationError, Params, PheromoneField, TourRecord,
                     Variant, combined_weight_matrix, init_pheromone)
from ._kernels import construct_tours
from .tsplib import Instance, load_instance

# Ant counts used in the published experiments, per instance.
DEFAULT_ANTS = {
    "bays29": 10, "att48": 10, "st70": 10, "eil76": 10,
    "eil51": 20, "kroa100": 20,
    "kroa200": 30, "lin318": 30,
}

SWEEP_ALPHA_BETA_BOUNDS = (0.0, 5.0)


def default_num_ants(name: str, dimension: int) -> int:
    known = DEFAULT_ANTS.get(name.lower())
    if known is not None:
        return known
    # unknown instances: n / 10 rounded to a multiple of 10, at least 10
    return max(10, 10 * int(round(dimension / 100)))


@dataclass
class RunConfig:
    """Everything one seeded run needs.

    ``instance`` is a filesystem path or a bundled instance name. Fields
    after ``optimum`` are behavior switches whose defaults are the library's
    documented conventions.
    """

    instance: str
    variant: Variant | str = Variant.DEA
    classifier: ClassifierKind | str | None = None
    params: Params = field(default_factory=Params)
    seed: int = 0
    stop_at_optimum: bool = False
    optimum: int | None = None
    classify_boundary: str = "inclusive"
    median_convention: str = "lower"
    dea_deposit_target: str = "best"
    punish_rank_scope: str = "all"
    lambda_branching: float = 0.05
    smoothing_delta: float = 0.5
    smoothing_trigger: float = 1.1
    smoothing_cooldown: int = 2500

    def __post_init__(self):
        self.variant = Variant(self.variant)
        if self.classifier is not None:
            self.classifier = ClassifierKind(self.classifier)
        if self.variant.dynamic and self.classifier is None:
            raise ConfigurationError(
                f"variant {self.variant.value!r} needs --classifier "
                "(mrts, mts or mets)")
        if not self.variant.dynamic and self.classifier is not None:
            raise ConfigurationError(
                f"variant {self.variant.value!r} is static; "
                "--classifier only applies to dea/dra variants")


@dataclass
class IterationStats:
    """Per-iteration telemetry."""

    index: int
    best_length: int
    threshold_value: float | None
    elite_count: int
    best_so_far: int
    avg_branching_factor: float | None = None


@dataclass
class RunResult:
    """Outcome of one seeded run."""

    config: RunConfig
    dataset: str
    best_perm: np.ndarray
    best_length: int
    iterations: int
    termination: str
    stats: list[IterationStats]
    optimum: int | None

    def iteration_bests(self) -> list[int]:
        return [s.best_length for s in self.stats]

    def elite_counts(self) -> list[int]:
        return [s.elite_count for s in self.stats]


@dataclass
class RunFailure:
    """Collected in sweep results when a sibling run raised."""

    config: RunConfig
    error: str


class RunState:
    """Mutable state of an in-progress run."""

    def __init__(self, config: RunConfig, inst: Instance):
        self.config = config
        self.inst = inst
        self.params = config.params
        variant = config.variant
        sigma = config.params.sigma_fixed or 6
        self.plan = updaters.UpdatePlan(
            variant=variant,
            classifier_kind=config.classifier if variant.dynamic else None,
            sigma=sigma, e_static=sigma)
        self.field: PheromoneField = init_pheromone(inst, config.params, variant)
        self.rng = np.random.default_rng(config.seed)
        self.eta_beta = inst.visibility_matrix() ** config.params.beta
        self.best: TourRecord | None = None
        self.iteration = 0
        self.last_smooth_iteration = 0
        self.optimum = (config.optimum if config.optimum is not None
                        else inst.optimum)


def run_iteration(state: RunState,
                  rng: np.random.Generator | None = None) -> IterationStats:
    """One construct -> classify -> update cycle.

    Random draws per iteration: m start cities, then one uniform per city
    choice per ant in ant order; this consumption order is part of the
    determinism contract. ``rng`` defaults to the state's own seeded stream.
    """
    cfg = state.config
    p = state.params
    inst = state.inst
    n = inst.dimension
    m = p.num_ants
    state.iteration += 1

    rng = rng if rng is not None else state.rng
    starts = rng.integers(0, n, size=m)
    uniforms = rng.random((m, n - 1))
    weight = combined_weight_matrix(state.field, inst, p,
                                    eta_beta=state.eta_beta)
    perms, lengths = construct_tours(weight, inst.distance_matrix(),
                                     starts, uniforms)
    tours = [TourRecord(perms[k], int(lengths[k])) for k in range(m)]

    ib_index = min(range(m), key=lambda k: (tours[k].length, k))
    ib = tours[ib_index]
    if state.best is None or ib.length < state.best.length:
        state.best = TourRecord(ib.perm.copy(), ib.length)

    threshold = None
    elite_idx: list[int] = []
    non_elite_idx: list[int] = []
    if state.plan.variant.dynamic:
        threshold = make_threshold(state.plan.classifier_kind,
                                   [t.length for t in tours],
                                   median_convention=cfg.median_convention)
        elite_idx, non_elite_idx = classify(tours, threshold,
                                            boundary=cfg.classify_boundary)

    field = state.field
    variant = state.plan.variant
    updaters.evaporate(field, p.rho)
    abf = None
    if variant is Variant.AS:
        updaters.as_deposit(field, tours, p.q_deposit)
    elif variant is Variant.EA:
        updaters.as_deposit(field, tours, p.q_deposit)
        updaters.elitist_bonus_static(field, state.best,
                                      state.plan.e_static, p.q_deposit)
    elif variant is Variant.RA:
        updaters.rank_update_static(field, tours, state.plan.sigma,
                                    p.q_deposit, state.best)
    elif variant is Variant.MMAS_IB_PTS:
        updaters.mmas_update(field, ib)
        abf = updaters.average_branching_factor(field, cfg.lambda_branching)
        stagnated = abf < cfg.smoothing_trigger
        cooled = (state.iteration - state.last_smooth_iteration
                  >= cfg.smoothing_cooldown)
        if stagnated and cooled:
            updaters.smooth_trails(field, cfg.smoothing_delta)
            state.last_smooth_iteration = state.iteration
    else:
        updaters.as_deposit(field, tours, p.q_deposit)
        elite = [tours[i] for i in elite_idx]
        if variant in (Variant.DEA, Variant.DEA_PUN):
            updaters.dynamic_elitist_update(
                field, elite, p.q_deposit,
                deposit_target=cfg.dea_deposit_target, best_so_far=state.best)
            if variant.punished:
                updaters.punish_elitist(field,
                                        [tours[i] for i in non_elite_idx],
                                        len(elite), p.q_punish)
        else:
            updaters.dynamic_rank_update(field, elite, p.q_deposit, state.best)
            if variant.punished:
                updaters.punish_rank(field, tours, p.q_punish,
                                     rank_scope=cfg.punish_rank_scope)

    return IterationStats(
        index=state.iteration,
        best_length=ib.length,
        threshold_value=None if threshold is None else float(threshold.value),
        elite_count=len(elite_idx),
        best_so_far=state.best.length,
        avg_branching_factor=abf,
    )


@lru_cache(maxsize=32)
def _cached_instance(path_or_name: str) -> Instance:
    return load_instance(path_or_name)


def prepare_state(config: RunConfig, inst: Instance | None = None) -> RunState:
    """Load the instance, resolve defaults and validate before iteration 1."""
    if inst is None:
        inst = _cached_instance(config.instance)
    return RunState(config, inst)


def run(config: RunConfig, inst: Instance | None = None) -> RunResult:
    """Execute one seeded run to termination."""
    state = prepare_state(config, inst)
    stats: list[IterationStats] = []
    termination = "max_iterations"
    for _ in range(config.params.max_iterations):
        stats.append(run_iteration(state))
        if (config.stop_at_optimum and state.optimum is not None
                and state.best.length <= state.optimum):
            termination = "optimum_reached"
            break
    return RunResult(
        config=config,
        dataset=state.inst.name,
        best_perm=state.best.perm,
        best_length=state.best.length,
        iterations=len(stats),
        termination=termination,
        stats=stats,
        optimum=state.optimum,
    )


def _run_for_pool(config: RunConfig):
    try:
        return run(config)
    except Exception as exc:  # noqa: BLE001 - sibling runs must not die
        return RunFailure(config=config, error=f"{type(exc).__name__}: {exc}")


def sweep(configs: list[RunConfig], n_jobs: int = 1):
    """Run every config; results come back in input order.

    Runs share nothing, so they may execute in parallel; per-run errors are
    returned as RunFailure entries instead of aborting the sweep.
    """
    if not configs:
        raise ValueError("sweep needs at least one config")
    if n_jobs == 1 or len(configs) == 1:
        return [_run_for_pool(c) for c in configs]
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(_run_for_pool, configs))


def seeded_replicates(config: RunConfig, seeds: int,
                      seed_base: int = 0) -> list[RunConfig]:
    """The same config under seeds seed_base .. seed_base + seeds - 1.

    Using the same seed list for every config point keeps replicates paired
    across configs, which the punished-vs-unpunished comparisons rely on.
    """
    return [replace(config, seed=seed_base + k) for k in range(seeds)]


_GRID_KEYS = ("instance", "variant", "classifier", "alpha", "beta", "rho",
              "q", "qstar", "ants", "iters", "stop_at_optimum")


def expand_grid(grid: dict, seeds: int = 1, seed_base: int = 0) -> list[RunConfig]:
    """Materialize the cartesian product of a parameter grid.

    Grid values may be scalars or lists; keys follow the CLI flag names.
    alpha and beta must stay inside the configured sweep bounds [0, 5].
    """
    unknown = set(grid) - set(_GRID_KEYS)
    if unknown:
        raise ConfigurationError(
            f"unknown grid keys: {sorted(unknown)}; known: {list(_GRID_KEYS)}")
    if "instance" not in grid:
        raise ConfigurationError("grid must name at least one instance")
    axes = []
    for key in _GRID_KEYS:
        if key in grid:
            value = grid[key]
            values = value if isinstance(value, (list, tuple)) else [value]
            axes.append([(key, v) for v in values])
    lo, hi = SWEEP_ALPHA_BETA_BOUNDS
    configs: list[RunConfig] = []
    for combo in itertools.product(*axes):
        chosen = dict(combo)
        for exponent in ("alpha", "beta"):
            if exponent in chosen and not lo <= chosen[exponent] <= hi:
                raise ConfigurationError(
                    f"{exponent}={chosen[exponent]} outside sweep "
                    f"bounds [{lo}, {hi}]")
        cfg = build_config(**chosen)
        configs.extend(seeded_replicates(cfg, seeds, seed_base))
    return configs


def build_config(instance: str, variant=None, classifier=None,
                 alpha=None, beta=None, rho=None, q=None, qstar=None,
                 ants=None, iters=None, stop_at_optimum=False,
                 seed=0) -> RunConfig:
    """Assemble a RunConfig from flag-style values, resolving defaults."""
    inst = _cached_instance(instance)
    defaults = Params()
    params = Params(
        alpha=alpha if alpha is not None else defaults.alpha,
        beta=beta if beta is not None else defaults.beta,
        rho=rho if rho is not None else defaults.rho,
        q_deposit=q if q is not None else defaults.q_deposit,
        q_punish=qstar if qstar is not None else defaults.q_punish,
        num_ants=(ants if ants is not None
                  else default_num_ants(inst.name, inst.dimension)),
        max_iterations=iters if iters is not None else defaults.max_iterations,
    )
    return RunConfig(
        instance=instance,
        variant=variant if variant is not None else Variant.DEA,
        classifier=classifier,
        params=params,
        seed=seed,
        stop_at_optimum=bool(stop_at_optimum),
    )
