"""Two-class clustering of rotation-process samples across series lengths."""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .clustering import Clustering, average_linkage, clustering_error, farthest_point
from .distance import TelescopeConfig, distance_matrix
from .synthgen import ALPHA_1, ALPHA_2, RotationProcessSpec, generate_rotation

log = logging.getLogger(__name__)

ALGORITHMS = {"average-linkage": average_linkage, "farthest-point": farthest_point}


@dataclass(frozen=True)
class ExperimentSpec:
    lengths: Tuple[int, ...] = (200, 500, 1000, 2000, 5000)
    alphas: Tuple[float, float] = (ALPHA_1, ALPHA_2)
    series_per_cluster: int = 10
    runs: int = 20
    config: TelescopeConfig = field(default_factory=TelescopeConfig)
    algorithm: str = "average-linkage"
    seed: int = 0

    def __post_init__(self):
        lengths = tuple(int(n) for n in self.lengths)
        if not lengths or any(n < 1 for n in lengths) or list(lengths) != sorted(set(lengths)):
            raise ValueError("lengths must be a non-empty ascending list of positive integers")
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if self.series_per_cluster < 1:
            raise ValueError("series_per_cluster must be at least 1")
        if len(self.alphas) != 2:
            raise ValueError("alphas must be a pair")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        object.__setattr__(self, "lengths", lengths)


@dataclass(frozen=True)
class ExperimentRow:
    length: int
    mean_error: float
    stderr: float
    wall_seconds: float
    errors: Tuple[float, ...] = ()


def _run_seeds(spec: ExperimentSpec, length_index: int, run: int) -> List[int]:
    ss = np.random.SeedSequence([spec.seed, length_index, run])
    return [int(s.generate_state(1)[0]) for s in ss.spawn(2 * spec.series_per_cluster)]


def single_run(spec: ExperimentSpec, length: int, length_index: int, run: int) -> float:
    """Generate both clusters, cluster with K=2 and return the clustering error."""
    seeds = _run_seeds(spec, length_index, run)
    m = spec.series_per_cluster
    samples, truth = [], []
    for i, seed in enumerate(seeds):
        cluster = i // m
        sid = f"c{cluster}_{i % m:02d}"
        samples.append(generate_rotation(RotationProcessSpec(spec.alphas[cluster], length, seed), id=sid))
        truth.append(cluster)
    dm = distance_matrix(spec.config, samples)
    found = ALGORITHMS[spec.algorithm](dm, 2)
    return clustering_error(found, Clustering.from_labels(dm.ids, truth))


def run_experiment(spec: ExperimentSpec) -> List[ExperimentRow]:
    rows = []
    for li, length in enumerate(spec.lengths):
        start = time.perf_counter()
        errors = []
        for run in range(spec.runs):
            errors.append(single_run(spec, length, li, run))
            log.info("length %d run %d/%d error %.3f", length, run + 1, spec.runs, errors[-1])
        wall = time.perf_counter() - start
        mean = float(np.mean(errors))
        se = float(np.std(errors, ddof=1) / math.sqrt(len(errors))) if len(errors) > 1 else 0.0
        rows.append(ExperimentRow(length, mean, se, wall, tuple(errors)))
        log.info("length %d: mean error %.4f (%.1fs)", length, mean, wall)
    return rows
