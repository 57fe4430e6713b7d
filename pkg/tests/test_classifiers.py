import numpy as np
import pytest

from dynants.classifiers import (ClassifierKind, classify, make_threshold,
                                 mean, median, mid_range)
from dynants.colony import TourRecord


def records(lengths):
    return [TourRecord(perm=np.arange(3), length=int(l)) for l in lengths]


def test_mid_range_examples():
    assert mid_range([10, 20]).value == 15
    assert mid_range([5, 5, 5]).value == 5
    assert mid_range([2022, 2100, 2046, 2088]).value == 2061
    assert mid_range([7]).kind is ClassifierKind.MRTS


def test_mean_examples():
    assert mean([2, 4, 6]).value == 4
    assert mean([9] * 12).value == 9
    assert abs(mean([10, 11, 19]).value - 40 / 3) <= 1e-9
    assert mean([1]).kind is ClassifierKind.MTS


def test_median_examples():
    assert median([7, 3, 9]).value == 7
    # even count takes the lower middle (1-based position n/2)
    assert median([1, 2, 3, 4]).value == 2
    assert median([1]).kind is ClassifierKind.METS


def test_median_matches_sort_oracle(rng):
    for _ in range(200):
        n = int(rng.integers(1, 102))
        values = list(map(int, rng.integers(1, 1000, size=n)))
        expected = sorted(values)[(n + 1) // 2 - 1 if n % 2 else n // 2 - 1]
        assert median(values).value == expected


def test_median_midpoint_convention():
    assert median([1, 2, 3, 4], convention="midpoint").value == 2.5
    assert median([7, 3, 9], convention="midpoint").value == 7
    with pytest.raises(ValueError, match="convention"):
        median([1, 2], convention="upper")


def test_empty_inputs_rejected():
    for fn in (mid_range, mean, median):
        with pytest.raises(ValueError, match="empty"):
            fn([])


def test_make_threshold_dispatch():
    lengths = [4, 8, 6]
    assert make_threshold("mrts", lengths).value == 6
    assert make_threshold("mts", lengths).value == 6
    assert make_threshold(ClassifierKind.METS, lengths).value == 6


def test_statistic_ordering_bounds(rng):
    for _ in range(100):
        values = list(map(int, rng.integers(1, 10_000,
                                            size=int(rng.integers(1, 60)))))
        lo, hi = min(values), max(values)
        for kind in ClassifierKind:
            t = make_threshold(kind, values)
            assert lo <= t.value <= hi


def test_classify_two_ants():
    tours = records([10, 20])
    elite, rest = classify(tours, mid_range([10, 20]))
    assert (elite, rest) == ([0], [1])
    assert tours[0].elite and not tours[1].elite


def test_classify_all_equal_falls_back_to_single_best():
    tours = records([7, 7, 7])
    elite, rest = classify(tours, mean([7, 7, 7]))
    assert elite == [0]
    assert rest == [1, 2]


def test_classify_strict_boundary_excludes_threshold():
    tours = records([5, 6, 7, 8, 9])
    elite, rest = classify(tours, make_threshold("mts", [5, 6, 7, 8, 9]))
    assert elite == [0, 1]
    assert rest == [2, 3, 4]


def test_classify_inclusive_boundary_admits_threshold():
    tours = records([5, 6, 7, 8, 9])
    elite, _ = classify(tours, make_threshold("mts", [5, 6, 7, 8, 9]),
                        boundary="inclusive")
    assert elite == [0, 1, 2]
    with pytest.raises(ValueError, match="boundary"):
        classify(tours, mean([5]), boundary="loose")


def test_classify_partition_invariants(rng):
    for _ in range(200):
        m = int(rng.integers(1, 40))
        lengths = list(map(int, rng.integers(10, 500, size=m)))
        tours = records(lengths)
        kind = list(ClassifierKind)[int(rng.integers(3))]
        boundary = ("strict", "inclusive")[int(rng.integers(2))]
        threshold = make_threshold(kind, lengths)
        elite, rest = classify(tours, threshold, boundary=boundary)
        assert sorted(elite + rest) == list(range(m))
        assert not set(elite) & set(rest)
        assert 1 <= len(elite) <= m
        # threshold separation (except for the single-best fallback)
        if boundary == "strict":
            rule_elected = any(l < threshold.value for l in lengths)
        else:
            rule_elected = any(l <= threshold.value for l in lengths)
        if rule_elected:
            if boundary == "strict":
                assert max(lengths[i] for i in elite) < threshold.value
                assert all(lengths[i] >= threshold.value for i in rest)
            else:
                assert max(lengths[i] for i in elite) <= threshold.value
                assert all(lengths[i] > threshold.value for i in rest)


def test_scale_equivariance(rng):
    for _ in range(100):
        m = int(rng.integers(2, 30))
        lengths = list(map(int, rng.integers(10, 10_000, size=m)))
        c = int(rng.integers(2, 500))
        scaled = [c * l for l in lengths]
        for kind in ClassifierKind:
            t = make_threshold(kind, lengths)
            ts = make_threshold(kind, scaled)
            assert ts.value == pytest.approx(c * t.value, rel=1e-12)
            e1, _ = classify(records(lengths), t)
            e2, _ = classify(records(scaled), ts)
            assert e1 == e2
