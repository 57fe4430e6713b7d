"""Shared colony machinery: parameters, the pheromone field, tour records
and the stochastic solution-construction step used by every variant."""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _kernels
from .tsplib import Instance

FLOOR_EPSILON = 1e-7


class ConfigurationError(ValueError):
    """Invalid parameter or variant combination, detected before iterating."""


class Variant(str, Enum):
    """Pheromone-update flavor of a run."""

    AS = "as"
    EA = "ea"
    RA = "ra"
    MMAS_IB_PTS = "mmas"
    DEA = "dea"
    DRA = "dra"
    DEA_PUN = "dea-pun"
    DRA_PUN = "dra-pun"

    @property
    def dynamic(self) -> bool:
        """True when the elite set is chosen per iteration by a classifier."""
        return self in (Variant.DEA, Variant.DRA, Variant.DEA_PUN,
                        Variant.DRA_PUN)

    @property
    def punished(self) -> bool:
        return self in (Variant.DEA_PUN, Variant.DRA_PUN)

    @property
    def rank_based(self) -> bool:
        return self in (Variant.RA, Variant.DRA, Variant.DRA_PUN)


@dataclass
class Params:
    """Numeric knobs shared by all variants.

    ``rho`` is the persistence factor: trails are multiplied by it each
    iteration, so rho = 1 means no evaporation. ``sigma_fixed`` is the fixed
    elite count used by the static EA/RA baselines only.
    """

    alpha: float = 1.0
    beta: float = 2.0
    rho: float = 0.9
    q_deposit: float = 100.0
    q_punish: float = 10.0
    num_ants: int = 10
    max_iterations: int = 5000
    sigma_fixed: int | None = None

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ConfigurationError(
                f"alpha and beta must be >= 0, got {self.alpha}, {self.beta}")
        if not 0 < self.rho <= 1:
            raise ConfigurationError(f"rho must be in (0, 1], got {self.rho}")
        if self.q_deposit <= 0:
            raise ConfigurationError(f"q_deposit must be > 0, got {self.q_deposit}")
        if self.q_punish < 0:
            raise ConfigurationError(f"q_punish must be >= 0, got {self.q_punish}")
        if self.num_ants < 1:
            raise ConfigurationError(f"num_ants must be >= 1, got {self.num_ants}")
        if self.max_iterations < 1:
            raise ConfigurationError(
                f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.sigma_fixed is not None and self.sigma_fixed < 1:
            raise ConfigurationError(
                f"sigma_fixed must be >= 1, got {self.sigma_fixed}")


@dataclass
class PheromoneField:
    """Dense symmetric trail matrix with an optional [tau_min, tau_max] band.

    The diagonal is kept at zero and excluded from clamping. ``floor_epsilon``
    is a hard lower bound for off-diagonal entries so that punishment can
    never make a tour unconstructible.
    """

    tau: np.ndarray
    tau_min: float | None = None
    tau_max: float | None = None
    floor_epsilon: float = FLOOR_EPSILON
    _off_mask: np.ndarray | None = field(default=None, repr=False,
                                         compare=False)

    @property
    def bounds_active(self) -> bool:
        return self.tau_min is not None and self.tau_max is not None

    @property
    def n(self) -> int:
        return self.tau.shape[0]

    def off_diagonal_mask(self) -> np.ndarray:
        if self._off_mask is None:
            self._off_mask = ~np.eye(self.n, dtype=bool)
        return self._off_mask

    def clamp_floor(self):
        off = self.off_diagonal_mask()
        floor = self.tau_min if self.bounds_active else self.floor_epsilon
        np.maximum(self.tau, floor, where=off, out=self.tau)

    def clamp_bounds(self):
        if not self.bounds_active:
            return
        off = self.off_diagonal_mask()
        np.maximum(self.tau, self.tau_min, where=off, out=self.tau)
        np.minimum(self.tau, self.tau_max, where=off, out=self.tau)


@dataclass
class TourRecord:
    """One ant's completed closed tour."""

    perm: np.ndarray
    length: int
    elite: bool = False


def transition_probabilities(current: int, visited, tau: PheromoneField,
                             inst: Instance, params: Params) -> np.ndarray:
    """Next-city probabilities from ``current`` given the visited set.

    Returns a length-n vector that is exactly zero on visited cities
    (including ``current``) and proportional to tau^alpha * eta^beta on the
    feasible neighborhood.
    """
    n = inst.dimension
    mask = np.zeros(n, dtype=bool)
    mask[np.fromiter(iter(visited), dtype=np.int64, count=-1)] = True
    mask[current] = True
    if mask.all():
        raise ValueError("empty feasible neighborhood: all cities visited")
    eta = inst.visibility_matrix()[current]
    weights = np.where(
        mask, 0.0, tau.tau[current] ** params.alpha * eta ** params.beta)
    total = weights.sum()
    if not total > 0.0:
        raise ValueError("zero total transition weight; "
                         "pheromone floor violated")
    return weights / total


def combined_weight_matrix(tau: PheromoneField, inst: Instance,
                           params: Params,
                           eta_beta: np.ndarray | None = None) -> np.ndarray:
    """tau^alpha * eta^beta for the whole field (diagonal stays zero).

    ``eta_beta`` lets the caller reuse the visibility power matrix across
    iterations, since it only depends on the instance and beta.
    """
    if eta_beta is None:
        eta_beta = inst.visibility_matrix() ** params.beta
    if params.alpha == 1.0:
        tau_alpha = tau.tau
    else:
        tau_alpha = tau.tau ** params.alpha
    w = tau_alpha * eta_beta
    np.fill_diagonal(w, 0.0)
    return w


def construct_tour(rng: np.random.Generator, start: int, tau: PheromoneField,
                   inst: Instance, params: Params) -> TourRecord:
    """Build one complete closed tour by roulette-wheel sampling.

    Consumes exactly inst.dimension - 1 uniform draws from ``rng``, one per
    city choice.
    """
    n = inst.dimension
    if not 0 <= start < n:
        raise ValueError(f"start city {start} outside 0..{n - 1}")
    weight = combined_weight_matrix(tau, inst, params)
    uniforms = rng.random((1, n - 1))
    perms, lengths = _kernels.construct_tours(
        weight, inst.distance_matrix(), np.array([start]), uniforms)
    return TourRecord(perm=perms[0], length=int(lengths[0]))


def nearest_neighbor_length(inst: Instance, start: int = 0) -> int:
    """Greedy closed-tour length from ``start``; ties pick the lowest index."""
    n = inst.dimension
    if not 0 <= start < n:
        raise ValueError(f"start city {start} outside 0..{n - 1}")
    d = inst.distance_matrix()
    visited = np.zeros(n, dtype=bool)
    visited[start] = True
    cur = start
    total = 0
    for _ in range(n - 1):
        row = np.where(visited, np.iinfo(np.int64).max, d[cur])
        nxt = int(row.argmin())
        total += int(d[cur, nxt])
        visited[nxt] = True
        cur = nxt
    return total + int(d[cur, start])


def init_pheromone(inst: Instance, params: Params,
                   variant: Variant) -> PheromoneField:
    """Uniform initial trails scaled by the nearest-neighbor tour length.

    AS-family variants start at m / L_nn with no upper bound; the max-min
    variant starts at tau_max = 1 / ((1 - rho) * L_nn) with
    tau_min = tau_max / (2n) and active bounds.
    """
    variant = Variant(variant)
    n = inst.dimension
    l_nn = nearest_neighbor_length(inst, 0)
    if variant is Variant.MMAS_IB_PTS:
        if params.rho == 1.0:
            raise ConfigurationError(
                "rho = 1 leaves tau_max undefined for the max-min variant")
        tau_max = 1.0 / ((1.0 - params.rho) * l_nn)
        tau_min = tau_max / (2 * n)
        tau = np.full((n, n), tau_max, dtype=np.float64)
        np.fill_diagonal(tau, 0.0)
        return PheromoneField(tau=tau, tau_min=tau_min, tau_max=tau_max)
    tau0 = params.num_ants / l_nn
    tau = np.full((n, n), tau0, dtype=np.float64)
    np.fill_diagonal(tau, 0.0)
    return PheromoneField(tau=tau)
