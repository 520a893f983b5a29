"""Distance-based clustering of samples.

All tie-breaking is by position in the distance matrix (smallest first), so
every algorithm here is deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse.csgraph import connected_components

from .distance import DistanceMatrix


@dataclass(frozen=True)
class Clustering:
    assignment: Dict[str, int]
    K: int

    def __post_init__(self):
        used = set(self.assignment.values())
        if used != set(range(self.K)):
            raise ValueError("every cluster index in 0..K-1 must be used")

    @classmethod
    def from_labels(cls, ids, labels) -> "Clustering":
        labels = [int(v) for v in labels]
        if len(ids) != len(labels):
            raise ValueError("one label per id required")
        return cls(dict(zip((str(i) for i in ids), labels)), len(set(labels)))

    def labels(self, ids) -> np.ndarray:
        return np.array([self.assignment[str(i)] for i in ids])

    def to_dict(self) -> dict:
        return {"K": self.K, "assignment": dict(self.assignment)}


def _relabel_by_first_member(groups) -> np.ndarray:
    """Cluster index order follows the smallest member of each group."""
    groups = sorted((sorted(g) for g in groups), key=lambda g: g[0])
    labels = np.empty(sum(len(g) for g in groups), dtype=np.int64)
    for c, g in enumerate(groups):
        labels[g] = c
    return labels


def _check_k(dm: DistanceMatrix, k: int):
    if k < 1:
        raise ValueError("number of clusters must be at least 1")
    if k > len(dm):
        raise ValueError("more clusters than samples")


def average_linkage(dm: DistanceMatrix, k: int) -> Clustering:
    """Agglomerative clustering with average inter-cluster distance.

    Starting from singletons, the two clusters with the smallest mean pairwise
    distance are merged until ``k`` remain. Among equal candidates the pair
    whose (smallest member, smallest member) is lexicographically first wins.
    """
    _check_k(dm, k)
    d = dm.values
    members = [[i] for i in range(len(dm))]
    # between-cluster distance sums; rows stay indexed by the cluster's first member
    sums = d.copy()
    alive = list(range(len(dm)))
    while len(alive) > k:
        best = None
        for ai, a in enumerate(alive):
            for b in alive[ai + 1:]:
                avg = sums[a, b] / (len(members[a]) * len(members[b]))
                if best is None or avg < best[0]:
                    best = (avg, a, b)
        _, a, b = best
        members[a] = members[a] + members[b]
        sums[a, :] += sums[b, :]
        sums[:, a] += sums[:, b]
        alive.remove(b)
    labels = _relabel_by_first_member(members[a] for a in alive)
    return Clustering.from_labels(dm.ids, labels)


def farthest_point(dm: DistanceMatrix, k: int):
    """Farthest-first traversal from the first sample, then nearest-center assignment."""
    _check_k(dm, k)
    d = dm.values
    n = len(dm)
    centers = [0]
    nearest = d[0].copy()
    for _ in range(1, k):
        cand = nearest.copy()
        cand[centers] = -np.inf
        c = int(np.argmax(cand))
        centers.append(c)
        np.minimum(nearest, d[c], out=nearest)
    labels = np.argmin(d[:, centers], axis=1)
    labels[centers] = np.arange(k)
    return Clustering.from_labels(dm.ids, labels)


def threshold_clustering(dm: DistanceMatrix, epsilon: float) -> Clustering:
    """Connected components of the graph joining samples at distance ``<= epsilon``."""
    if not epsilon >= 0:
        raise ValueError("epsilon must be non-negative")
    _, comp = connected_components(dm.values <= epsilon, directed=False)
    groups = {}
    for i, c in enumerate(comp):
        groups.setdefault(c, []).append(i)
    return Clustering.from_labels(dm.ids, _relabel_by_first_member(groups.values()))


def clustering_error(found: Clustering, truth: Clustering) -> float:
    """Fraction of samples misassigned under the best matching of cluster labels."""
    if set(found.assignment) != set(truth.assignment):
        raise ValueError("id mismatch")
    ids = sorted(truth.assignment)
    f = found.labels(ids)
    t = truth.labels(ids)
    table = np.zeros((found.K, truth.K), dtype=np.int64)
    np.add.at(table, (f, t), 1)
    r, c = linear_sum_assignment(table, maximize=True)
    return 1.0 - table[r, c].sum() / len(ids)
