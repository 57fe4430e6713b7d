"""Statistical selection of elite ants.

Each iteration's tour lengths are reduced to a single boundary value
(mid-range, mean, or median); ants strictly below the boundary form the
performing class and receive the second pheromone reinforcement.
"""

from dataclasses import dataclass
from enum import Enum

from .colony import TourRecord


class ClassifierKind(str, Enum):
    MRTS = "mrts"  # mid-range tour selection
    MTS = "mts"    # mean tour selection
    METS = "mets"  # median tour selection


@dataclass(frozen=True)
class Threshold:
    """Class boundary separating performing from non-performing ants."""

    kind: ClassifierKind
    value: float


def mid_range(lengths) -> Threshold:
    """(best + worst) / 2 of the iteration's tour lengths."""
    lengths = list(lengths)
    if not lengths:
        raise ValueError("mid_range of an empty length list")
    return Threshold(ClassifierKind.MRTS, (min(lengths) + max(lengths)) / 2)


def mean(lengths) -> Threshold:
    """Arithmetic mean of the iteration's tour lengths."""
    lengths = list(lengths)
    if not lengths:
        raise ValueError("mean of an empty length list")
    return Threshold(ClassifierKind.MTS, sum(lengths) / len(lengths))


def median(lengths, convention: str = "lower") -> Threshold:
    """Order-statistic median of the iteration's tour lengths.

    With the default "lower" convention the boundary is the element at
    1-based position ceil(n/2) for odd n and n/2 for even n, i.e. the lower
    of the two middle values. "midpoint" averages the two middles instead.
    """
    lengths = sorted(lengths)
    n = len(lengths)
    if n == 0:
        raise ValueError("median of an empty length list")
    if convention == "lower":
        pos = (n + 1) // 2 if n % 2 else n // 2
        value = float(lengths[pos - 1])
    elif convention == "midpoint":
        lo, hi = lengths[(n - 1) // 2], lengths[n // 2]
        value = (lo + hi) / 2
    else:
        raise ValueError(f"unknown median convention {convention!r}")
    return Threshold(ClassifierKind.METS, value)


def make_threshold(kind: ClassifierKind | str, lengths,
                   median_convention: str = "lower") -> Threshold:
    kind = ClassifierKind(kind)
    if kind is ClassifierKind.MRTS:
        return mid_range(lengths)
    if kind is ClassifierKind.MTS:
        return mean(lengths)
    return median(lengths, convention=median_convention)


def classify(tours: list[TourRecord], threshold: Threshold,
             boundary: str = "strict") -> tuple[list[int], list[int]]:
    """Partition ants into (elite, non-elite) index lists.

    "strict" admits lengths < threshold; "inclusive" admits <= threshold.
    If the boundary rule elects nobody (under the strict rule this is the
    fully converged, all-lengths-equal iteration), the single iteration-best
    ant (lowest length, then lowest index) is promoted so the second
    reinforcement is always defined. Elite flags are written onto the
    records.
    """
    if not tours:
        raise ValueError("classify requires at least one tour")
    if boundary == "strict":
        elite = [i for i, t in enumerate(tours) if t.length < threshold.value]
    elif boundary == "inclusive":
        elite = [i for i, t in enumerate(tours) if t.length <= threshold.value]
    else:
        raise ValueError(f"unknown boundary rule {boundary!r}")
    if not elite:
        elite = [min(range(len(tours)), key=lambda i: (tours[i].length, i))]
    elite_set = set(elite)
    non_elite = [i for i in range(len(tours)) if i not in elite_set]
    for i, t in enumerate(tours):
        t.elite = i in elite_set
    return elite, non_elite
