"""Embedding-space numerics: cosine similarity and seeded k-means clustering.

Pure functions over numpy arrays; safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from .errors import InputError

MAX_ITERATIONS = 100
RELATIVE_IMPROVEMENT_STOP = 1e-6


def cosine(a: Sequence[float], b: Sequence[float]) -> float:
    """Cosine similarity; defined as 0.0 when either vector is all zeros."""
    va = np.asarray(a, dtype=float)
    vb = np.asarray(b, dtype=float)
    if va.shape != vb.shape:
        raise InputError(f"cosine: dimension mismatch {va.shape} vs {vb.shape}")
    na = float(np.linalg.norm(va))
    nb = float(np.linalg.norm(vb))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(va, vb) / (na * nb))


@dataclass
class ClusterResult:
    k: int
    assignments: List[int]          # point index -> cluster id
    centroids: List[np.ndarray]
    representatives: List[int]      # per cluster: assigned point nearest its centroid
    inertia_history: List[float] = field(default_factory=list)


def _kmeans_pp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    chosen = [int(rng.integers(n))]
    d2 = np.sum((points - points[chosen[0]]) ** 2, axis=1)
    while len(chosen) < k:
        total = float(d2.sum())
        if total <= 0.0:
            # Remaining points coincide with chosen centers; take the lowest
            # unchosen index so center indices stay distinct.
            idx = min(i for i in range(n) if i not in set(chosen))
        else:
            idx = int(rng.choice(n, p=d2 / total))
            if idx in chosen:
                idx = min(i for i in range(n) if i not in set(chosen))
        chosen.append(idx)
        d2 = np.minimum(d2, np.sum((points - points[idx]) ** 2, axis=1))
    return points[chosen].copy()


def kmeans(points: Sequence[Sequence[float]], k: int, seed: int) -> ClusterResult:
    """Seeded k-means with k-means++ initialization.

    Deterministic given the seed. Assignment ties go to the lowest cluster id;
    the representative of a cluster is its assigned point nearest the centroid,
    ties broken by lowest point index.
    """
    X = np.asarray(points, dtype=float)
    if X.ndim != 2:
        X = X.reshape(len(points), -1)
    n = X.shape[0]
    if not 1 <= k <= n:
        raise InputError(f"kmeans: k={k} out of range 1..{n}")
    if not np.all(np.isfinite(X)):
        raise InputError("kmeans: non-finite point component")

    rng = np.random.default_rng(seed)
    centroids = _kmeans_pp_init(X, k, rng)

    assignments = np.full(n, -1, dtype=int)
    inertia_history: List[float] = []
    prev_inertia = None
    for _ in range(MAX_ITERATIONS):
        dists = np.linalg.norm(X[:, None, :] - centroids[None, :, :], axis=2)
        new_assign = np.argmin(dists, axis=1)

        # Refill empty clusters with the farthest point from a multi-member one.
        for c in range(k):
            if np.any(new_assign == c):
                continue
            counts = np.bincount(new_assign, minlength=k)
            eligible = np.where(counts[new_assign] > 1)[0]
            if eligible.size == 0:
                continue
            point_dists = dists[eligible, new_assign[eligible]]
            far = eligible[int(np.argmax(point_dists))]
            new_assign[far] = c

        inertia = float(
            np.sum((X - centroids[new_assign]) ** 2)
        )
        inertia_history.append(inertia)
        if np.array_equal(new_assign, assignments):
            break
        assignments = new_assign
        for c in range(k):
            members = X[assignments == c]
            if members.size:
                centroids[c] = members.mean(axis=0)
        if prev_inertia is not None and prev_inertia > 0:
            if (prev_inertia - inertia) / prev_inertia < RELATIVE_IMPROVEMENT_STOP:
                break
        prev_inertia = inertia

    representatives = []
    for c in range(k):
        members = np.where(assignments == c)[0]
        dist_to_centroid = np.linalg.norm(X[members] - centroids[c], axis=1)
        representatives.append(int(members[int(np.argmin(dist_to_centroid))]))

    return ClusterResult(
        k=k,
        assignments=[int(a) for a in assignments],
        centroids=[centroids[c].copy() for c in range(k)],
        representatives=representatives,
        inertia_history=inertia_history,
    )
