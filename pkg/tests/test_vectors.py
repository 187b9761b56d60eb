"""Cosine and k-means against hand computations and brute-force oracles."""

import itertools
import math

import numpy as np
import pytest

from convomine.errors import InputError
from convomine.vectors import ClusterResult, cosine, kmeans


class TestCosine:
    def test_identity(self):
        assert cosine([3.0, 4.0], [3.0, 4.0]) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert cosine([1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_forty_five_degrees(self):
        # hand computation: 1/sqrt(2)
        assert abs(cosine([1.0, 1.0], [1.0, 0.0]) - 1.0 / math.sqrt(2)) < 1e-9

    def test_dim_mismatch(self):
        with pytest.raises(InputError):
            cosine([1.0, 2.0], [1.0, 2.0, 3.0])

    def test_zero_vector_defined_as_zero(self):
        assert cosine([0.0, 0.0], [1.0, 2.0]) == 0.0
        assert cosine([1.0, 2.0], [0.0, 0.0]) == 0.0

    def test_symmetry(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            a = rng.normal(size=6)
            b = rng.normal(size=6)
            assert abs(cosine(a, b) - cosine(b, a)) < 1e-12

    def test_range_for_nonnegative_vectors(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            a = rng.uniform(0, 5, size=4)
            b = rng.uniform(0, 5, size=4)
            assert -1e-12 <= cosine(a, b) <= 1.0 + 1e-12


def brute_force_two_partition(points):
    """All 2-partitions; return the one minimizing within-cluster variance."""
    points = np.asarray(points, dtype=float)
    n = len(points)
    best, best_sse = None, None
    for bits in itertools.product([0, 1], repeat=n):
        if len(set(bits)) != 2:
            continue
        sse = 0.0
        for c in (0, 1):
            members = points[[i for i in range(n) if bits[i] == c]]
            sse += float(np.sum((members - members.mean(axis=0)) ** 2))
        if best_sse is None or sse < best_sse - 1e-12:
            best, best_sse = bits, sse
    groups = [frozenset(i for i in range(n) if best[i] == c) for c in (0, 1)]
    return frozenset(groups)


class TestKMeans:
    def test_identical_points_k1_representative_tiebreak(self):
        result = kmeans([[1.0, 1.0]] * 3, 1, seed=5)
        assert result.assignments == [0, 0, 0]
        assert result.representatives == [0]

    def test_two_obvious_clusters_match_brute_force(self):
        points = [[0.0, 0.0], [0.0, 1.0], [10.0, 10.0], [10.0, 11.0]]
        result = kmeans(points, 2, seed=11)
        got = frozenset(
            frozenset(i for i, a in enumerate(result.assignments) if a == c)
            for c in range(2)
        )
        assert got == brute_force_two_partition(points)
        assert got == frozenset({frozenset({0, 1}), frozenset({2, 3})})

    def test_k_equals_n(self):
        points = [[0.0], [5.0], [9.0], [14.0]]
        result = kmeans(points, 4, seed=3)
        assert sorted(result.representatives) == [0, 1, 2, 3]
        assert sorted(result.assignments) == [0, 1, 2, 3]

    def test_k_out_of_range(self):
        with pytest.raises(InputError):
            kmeans([[1.0]], 2, seed=0)
        with pytest.raises(InputError):
            kmeans([[1.0]], 0, seed=0)

    def test_deterministic_given_seed(self):
        rng = np.random.default_rng(0)
        points = rng.normal(size=(40, 3))
        a = kmeans(points, 5, seed=123)
        b = kmeans(points, 5, seed=123)
        assert a.assignments == b.assignments
        assert a.representatives == b.representatives

    def test_inertia_non_increasing(self):
        rng = np.random.default_rng(8)
        for trial in range(20):
            points = rng.normal(size=(30, 4))
            result = kmeans(points, 4, seed=trial)
            history = result.inertia_history
            assert all(
                history[i + 1] <= history[i] + 1e-9
                for i in range(len(history) - 1)
            )

    def test_representatives_are_distinct_and_exactly_k(self):
        rng = np.random.default_rng(21)
        for trial in range(20):
            n = int(rng.integers(5, 30))
            k = int(rng.integers(1, n + 1))
            points = rng.normal(size=(n, 3))
            result = kmeans(points, k, seed=trial)
            assert len(result.representatives) == k
            assert len(set(result.representatives)) == k
            assert set(result.assignments) == set(range(k))
            for c, rep in enumerate(result.representatives):
                assert result.assignments[rep] == c
