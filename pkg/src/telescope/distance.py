"""Empirical telescope distance and pairwise distance matrices."""
from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .classifiers import ExactOracle, KernelSVM, SummandEstimator
from .core import DepthPolicy, Sample, WeightScheme, depth, extract_windows, weight

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TelescopeConfig:
    weights: WeightScheme = field(default_factory=WeightScheme.inverse_square)
    depth: DepthPolicy = field(default_factory=DepthPolicy.log_length)
    estimator: SummandEstimator = field(default_factory=KernelSVM)

    @classmethod
    def oracle(cls, weights: Optional[WeightScheme] = None, depth: Optional[DepthPolicy] = None):
        return cls(weights or WeightScheme.inverse_square(), depth or DepthPolicy.log_length(), ExactOracle())


def _order_key(s: Sample) -> bytes:
    h = hashlib.blake2b(digest_size=16)
    h.update(repr((s.values.dtype.str, s.values.shape, s.alphabet)).encode())
    h.update(s.values.tobytes())
    return h.digest()


def summands(cfg: TelescopeConfig, x: Sample, y: Sample) -> list:
    """Per-order terms ``(k, w_k, summand_k)`` that make up the distance."""
    if x.dim != y.dim:
        raise ValueError("incompatible samples")
    # a fixed pair orientation makes the result exactly symmetric
    if _order_key(y) < _order_key(x):
        x, y = y, x
    gamma = depth(cfg.depth, min(len(x), len(y)))
    out = []
    for k in range(1, gamma + 1):
        w = weight(cfg.weights, k)
        if w == 0.0:
            break
        out.append((k, w, cfg.estimator.estimate_summand(extract_windows(x, y, k))))
    return out


def telescope_distance(cfg: TelescopeConfig, x: Sample, y: Sample) -> float:
    """``sum_{k <= depth} w_k * summand_k(x, y)`` with the depth taken at the shorter length."""
    return float(sum(w * s for _, w, s in summands(cfg, x, y)))


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    ids: tuple
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64)
        ids = tuple(str(i) for i in self.ids)
        if vals.ndim != 2 or vals.shape[0] != vals.shape[1] or vals.shape[0] != len(ids):
            raise ValueError("distance matrix must be square and match its ids")
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate sample ids")
        if not np.array_equal(vals, vals.T):
            raise ValueError("distance matrix must be symmetric")
        if np.any(np.diag(vals) != 0):
            raise ValueError("distance matrix must have a zero diagonal")
        if np.any(vals < 0) or not np.all(np.isfinite(vals)):
            raise ValueError("distances must be finite and non-negative")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "ids", ids)

    def __len__(self):
        return len(self.ids)


def distance_matrix(
    cfg: TelescopeConfig,
    samples: Sequence[Sample],
    ids: Optional[Sequence[str]] = None,
    progress: Optional[Callable[[int, int], None]] = None,
) -> DistanceMatrix:
    """Pairwise telescope distances; each unordered pair is computed once."""
    n = len(samples)
    if n < 2:
        raise ValueError("need at least two samples")
    if len({s.dim for s in samples}) != 1:
        raise ValueError("incompatible samples")
    if ids is None:
        ids = [s.id or str(i) for i, s in enumerate(samples)]
    vals = np.zeros((n, n))
    total = n * (n - 1) // 2
    done = 0
    for i in range(n):
        for j in range(i + 1, n):
            vals[i, j] = vals[j, i] = telescope_distance(cfg, samples[i], samples[j])
            done += 1
            if progress is not None:
                progress(done, total)
    log.debug("computed %d pairwise distances", total)
    return DistanceMatrix(tuple(ids), vals)
