import numpy as np
import pytest

from dynants.tsplib import Instance


def explicit_instance(matrix, name="toy") -> Instance:
    """Instance from a symmetric integer matrix (zero diagonal)."""
    weights = np.asarray(matrix, dtype=np.int64)
    weights.flags.writeable = False
    return Instance(name=name, dimension=weights.shape[0],
                    edge_weight_kind="EXPLICIT", weights=weights)


def euc_instance(coords, name="toy") -> Instance:
    pts = np.asarray(coords, dtype=np.float64)
    pts.flags.writeable = False
    return Instance(name=name, dimension=pts.shape[0],
                    edge_weight_kind="EUC_2D", coords=pts)


def random_explicit_instance(rng, n, low=1, high=100) -> Instance:
    """Random symmetric positive integer matrix instance."""
    m = rng.integers(low, high, size=(n, n))
    m = np.triu(m, 1)
    m = m + m.T
    return explicit_instance(m, name=f"rand{n}")


@pytest.fixture
def right_triangle() -> Instance:
    # cities (0,0), (0,3), (4,0): rounded edges 3, 5, 4
    return euc_instance([(0.0, 0.0), (0.0, 3.0), (4.0, 0.0)], name="tri345")


@pytest.fixture
def unit_triangle() -> Instance:
    return explicit_instance([[0, 1, 1], [1, 0, 1], [1, 1, 0]], name="unit3")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0xDA)
