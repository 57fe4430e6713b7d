"""scikit-learn style front end.

``AntColonyTSP`` behaves like any other estimator: hyperparameters in
``__init__``, ``fit(X)`` to solve, fitted attributes with trailing
underscores, and ``get_params``/``set_params`` (and therefore ``clone`` and
grid search) via BaseEstimator.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array

from .colony import Params, Variant
from .engine import RunConfig, default_num_ants, run
from .tsplib import Instance


def _instance_from_array(X: np.ndarray) -> Instance:
    """Interpret X as a TSP instance.

    A square symmetric integer-valued matrix with a zero diagonal is taken
    as explicit edge weights; an (n, 2) array is taken as planar city
    coordinates under the nearest-integer Euclidean metric.
    """
    X = check_array(X, dtype="numeric", ensure_2d=True)
    n = X.shape[0]
    if n < 3:
        raise ValueError(f"need at least 3 cities, got {n}")
    if X.shape[1] == X.shape[0]:
        if not np.allclose(X, X.T):
            raise ValueError("distance matrix must be symmetric")
        if np.diag(X).any():
            raise ValueError("distance matrix must have a zero diagonal")
        weights = np.rint(X).astype(np.int64)
        if not np.allclose(X, weights):
            raise ValueError("distance matrix must be integer-valued; "
                             "round it to the intended integer metric first")
        off = ~np.eye(n, dtype=bool)
        if (weights[off] <= 0).any():
            raise ValueError("off-diagonal distances must be positive")
        weights.flags.writeable = False
        return Instance(name=f"matrix{n}", dimension=n,
                        edge_weight_kind="EXPLICIT", weights=weights)
    if X.shape[1] == 2:
        coords = np.ascontiguousarray(X, dtype=np.float64)
        coords.flags.writeable = False
        inst = Instance(name=f"points{n}", dimension=n,
                        edge_weight_kind="EUC_2D", coords=coords)
        d = inst.distance_matrix()
        if (d[~np.eye(n, dtype=bool)] <= 0).any():
            raise ValueError("two cities coincide after integer rounding; "
                             "visibility would be undefined")
        return inst
    raise ValueError(
        f"X must be an (n, n) distance matrix or (n, 2) coordinates, "
        f"got shape {X.shape}")


class AntColonyTSP(BaseEstimator):
    """Solve a symmetric TSP instance with an ant colony.

    Parameters mirror the command-line flags: ``variant`` picks the update
    rule ("as", "ea", "ra", "mmas", "dea", "dra", "dea-pun", "dra-pun"),
    ``classifier`` the elite-selection statistic for the dynamic variants
    ("mrts", "mts", "mets"; ignored by static variants). ``n_ants`` of None
    falls back to the per-instance experiment defaults.

    Attributes set by fit: ``best_tour_`` (city permutation), ``best_length_``,
    ``n_iter_``, ``result_`` (the full run record) and, when an ``optimum``
    target was given, ``deviation_pct_``.
    """

    def __init__(self, variant="dea", classifier="mets", alpha=1.0, beta=2.0,
                 rho=0.9, q=100.0, q_star=10.0, n_ants=None, max_iter=5000,
                 stop_at_optimum=False, optimum=None, random_state=None):
        self.variant = variant
        self.classifier = classifier
        self.alpha = alpha
        self.beta = beta
        self.rho = rho
        self.q = q
        self.q_star = q_star
        self.n_ants = n_ants
        self.max_iter = max_iter
        self.stop_at_optimum = stop_at_optimum
        self.optimum = optimum
        self.random_state = random_state

    def fit(self, X, y=None):
        """Run the colony on X and record the best tour found."""
        inst = _instance_from_array(X)
        variant = Variant(self.variant)
        seed = (self.random_state if self.random_state is not None
                else int(np.random.SeedSequence().entropy) % (2 ** 63))
        params = Params(
            alpha=self.alpha, beta=self.beta, rho=self.rho,
            q_deposit=self.q, q_punish=self.q_star,
            num_ants=(self.n_ants if self.n_ants is not None
                      else default_num_ants(inst.name, inst.dimension)),
            max_iterations=self.max_iter,
        )
        config = RunConfig(
            instance=inst.name,
            variant=variant,
            classifier=self.classifier if variant.dynamic else None,
            params=params,
            seed=seed,
            stop_at_optimum=self.stop_at_optimum,
            optimum=self.optimum,
        )
        result = run(config, inst=inst)
        self.result_ = result
        self.best_tour_ = result.best_perm
        self.best_length_ = result.best_length
        self.n_iter_ = result.iterations
        if result.optimum is not None:
            self.deviation_pct_ = (100.0 * (result.best_length - result.optimum)
                                   / result.optimum)
        return self

    def score(self, X=None, y=None) -> float:
        """Negative best tour length, so bigger is better for model selection."""
        if not hasattr(self, "best_length_"):
            raise AttributeError("fit the estimator before scoring")
        return -float(self.best_length_)
