"""Pheromone update rules for every variant in scope.

All deposits and withdrawals touch both orientations of an edge, so the
field stays exactly symmetric. Withdrawals are clamped at the field's floor
(or tau_min when bounds are active) so every edge stays constructible.
"""

from dataclasses import dataclass

import numpy as np

from .classifiers import ClassifierKind
from .colony import ConfigurationError, PheromoneField, TourRecord, Variant


@dataclass(frozen=True)
class UpdatePlan:
    """Which update pipeline a run executes.

    ``classifier_kind`` must be present exactly for the dynamic variants;
    ``sigma`` and ``e_static`` drive the static rank/elitist baselines.
    """

    variant: Variant
    classifier_kind: ClassifierKind | None = None
    sigma: int | None = None
    e_static: int | None = None

    def __post_init__(self):
        if self.variant.dynamic and self.classifier_kind is None:
            raise ConfigurationError(
                f"variant {self.variant.value!r} needs a classifier "
                "(mrts, mts or mets)")
        if not self.variant.dynamic and self.classifier_kind is not None:
            raise ConfigurationError(
                f"variant {self.variant.value!r} is static; "
                "a classifier makes no sense here")


def _apply_on_tour(field: PheromoneField, perm: np.ndarray, amount: float):
    rows = perm
    cols = np.roll(perm, -1)
    field.tau[rows, cols] += amount
    field.tau[cols, rows] += amount


def evaporate(field: PheromoneField, rho: float):
    """Multiply every trail by the persistence factor, then clamp the floor."""
    if not 0 < rho <= 1:
        raise ConfigurationError(f"rho must be in (0, 1], got {rho}")
    field.tau *= rho
    field.clamp_floor()


def as_deposit(field: PheromoneField, tours: list[TourRecord], q: float):
    """Every ant adds q / L_k to each edge of its own tour."""
    for t in tours:
        _apply_on_tour(field, t.perm, q / t.length)


def elitist_bonus_static(field: PheromoneField, best_so_far: TourRecord,
                         e: int, q: float):
    """Best-so-far edges gain e * q / L*; nothing else changes."""
    if e == 0:
        return
    _apply_on_tour(field, best_so_far.perm, e * q / best_so_far.length)


def rank_update_static(field: PheromoneField, tours: list[TourRecord],
                       sigma: int, q: float, best_so_far: TourRecord):
    """Fixed-size rank update: no communal deposit, only the sigma-1 best
    ranked ants plus a weighted best-so-far bonus deposit."""
    if sigma > len(tours):
        raise ConfigurationError(
            f"sigma={sigma} exceeds the ant count {len(tours)}")
    ranked = sorted(range(len(tours)), key=lambda i: (tours[i].length, i))
    for mu in range(1, sigma):
        t = tours[ranked[mu - 1]]
        _apply_on_tour(field, t.perm, (sigma - mu) * q / t.length)
    _apply_on_tour(field, best_so_far.perm, sigma * q / best_so_far.length)


def mmas_update(field: PheromoneField, iteration_best: TourRecord):
    """Iteration-best deposit of 1 / L_ib, then clamp into [tau_min, tau_max]."""
    if not field.bounds_active:
        raise ConfigurationError("max-min update requires active trail bounds")
    _apply_on_tour(field, iteration_best.perm, 1.0 / iteration_best.length)
    field.clamp_bounds()


def branching_factor(field: PheromoneField, node: int, lam: float) -> int:
    """Outgoing edges of ``node`` whose trail strictly exceeds
    min + lam * (max - min) over the node's outgoing trails.

    A fully uniform row reports 1: exactly one usable edge remains in
    practice once all alternatives are indistinguishable.
    """
    row = np.delete(field.tau[node], node)
    lo, hi = row.min(), row.max()
    if hi == lo:
        return 1
    cut = lo + lam * (hi - lo)
    return int((row > cut).sum())


def average_branching_factor(field: PheromoneField, lam: float) -> float:
    """Mean branching over all nodes, halved for symmetric double counting.

    Every undirected tour edge shows up in two rows, so a field fully
    converged onto one closed tour reads exactly 1.0.
    """
    tau = field.tau
    n = field.n
    off = field.off_diagonal_mask()
    masked = np.where(off, tau, np.nan)
    lo = np.nanmin(masked, axis=1)
    hi = np.nanmax(masked, axis=1)
    cut = lo + lam * (hi - lo)
    counts = ((masked > cut[:, None]) & off).sum(axis=1)
    counts[hi == lo] = 1
    return float(counts.sum()) / (2 * n)


def smooth_trails(field: PheromoneField, delta: float):
    """Move every trail toward tau_max by a fraction delta of its gap."""
    if not field.bounds_active:
        raise ConfigurationError("trail smoothing requires active bounds")
    if not 0 < delta <= 1:
        raise ConfigurationError(f"delta must be in (0, 1], got {delta}")
    off = field.off_diagonal_mask()
    field.tau[off] += delta * (field.tau_max - field.tau[off])


def dynamic_elitist_update(field: PheromoneField, elite: list[TourRecord],
                           q: float, deposit_target: str = "own",
                           best_so_far: TourRecord | None = None):
    """Second reinforcement for a classifier-chosen elite set.

    With e = len(elite), each elite ant adds e * q / L_k to its own tour
    ("own", the default); the "best" target instead grants a single
    e * q / L* bonus to the best-so-far tour.
    """
    if not elite:
        raise ValueError("elite set must not be empty")
    e = len(elite)
    if deposit_target == "own":
        for t in elite:
            _apply_on_tour(field, t.perm, e * q / t.length)
    elif deposit_target == "best":
        if best_so_far is None:
            raise ValueError("deposit_target='best' needs best_so_far")
        _apply_on_tour(field, best_so_far.perm, e * q / best_so_far.length)
    else:
        raise ValueError(f"unknown deposit target {deposit_target!r}")


def dynamic_rank_update(field: PheromoneField, elite: list[TourRecord],
                        q: float, best_so_far: TourRecord):
    """Rank update with sigma = len(elite) chosen per iteration."""
    if not elite:
        raise ValueError("elite set must not be empty")
    sigma = len(elite)
    ranked = sorted(range(len(elite)), key=lambda i: (elite[i].length, i))
    for mu in range(1, sigma):
        t = elite[ranked[mu - 1]]
        _apply_on_tour(field, t.perm, (sigma - mu) * q / t.length)
    _apply_on_tour(field, best_so_far.perm, sigma * q / best_so_far.length)


def punish_elitist(field: PheromoneField, non_elite: list[TourRecord],
                   e: int, q_star: float):
    """Each non-performing ant strips e * q_star / L_k off its tour edges."""
    if q_star == 0 or not non_elite:
        return
    for t in non_elite:
        _apply_on_tour(field, t.perm, -e * q_star / t.length)
    field.clamp_floor()


def punish_rank(field: PheromoneField, tours: list[TourRecord],
                q_star: float, rank_scope: str = "all"):
    """Rank-weighted punishment of the non-performing ants.

    Ants are ranked ascending by length; a non-elite ant at 1-based rank k
    strips q_star * (m - k) / L_k, so the overall worst ant strips nothing.
    ``rank_scope`` "all" ranks over all m ants (default); "subset" ranks
    within the non-elite subset only.
    """
    if q_star == 0:
        return
    m = len(tours)
    if rank_scope == "all":
        pool = sorted(range(m), key=lambda i: (tours[i].length, i))
        ranked = [(k, tours[i]) for k, i in enumerate(pool, start=1)
                  if not tours[i].elite]
    elif rank_scope == "subset":
        pool = sorted((i for i in range(m) if not tours[i].elite),
                      key=lambda i: (tours[i].length, i))
        ranked = [(k, tours[i]) for k, i in enumerate(pool, start=1)]
    else:
        raise ValueError(f"unknown rank scope {rank_scope!r}")
    for k, t in ranked:
        if m - k > 0:
            _apply_on_tour(field, t.perm, -q_star * (m - k) / t.length)
    field.clamp_floor()
