"""Estimators for a single telescope summand.

A summand is ``sup_h |mean_1 h - mean_0 h|`` over a class of indicator
functions on windows. Two back-ends are provided:

* :class:`ExactOracle` takes the supremum over *all* indicator sets of a
  finite window domain, which is the total variation distance between the
  two window histograms.
* :class:`KernelSVM` trains a weighted soft-margin SVM (SMO on the dual) and
  reports the mean gap of its decision rule on the training windows.
"""
from __future__ import annotations

import hashlib
import math
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .core import WindowSet

_CHUNK = 256
_TAU = 1e-12


class DiscreteAlphabetRequired(ValueError):
    def __init__(self, msg: str = "oracle requires discrete alphabet"):
        super().__init__(msg)


# --------------------------------------------------------------------------
# exact oracle


def _window_codes(windows: np.ndarray, alphabet: tuple) -> Optional[np.ndarray]:
    """Mixed-radix integer code per window, or None when it would overflow."""
    base = len(alphabet)
    width = windows.shape[1]
    if width * math.log2(max(base, 2)) >= 62:
        return None
    digits = np.searchsorted(np.asarray(alphabet, dtype=np.int64), windows)
    radix = base ** np.arange(width, dtype=np.int64)
    return digits @ radix


def window_histograms(ws: WindowSet):
    """Counts of every distinct window value, aligned across the two classes.

    :returns: ``(counts1, counts0)`` integer arrays over the union of observed
        window values.
    """
    if ws.alphabet is None:
        raise DiscreteAlphabetRequired()
    n1 = ws.class1.shape[0]
    c1 = _window_codes(ws.class1, ws.alphabet)
    if c1 is not None:
        c0 = _window_codes(ws.class0, ws.alphabet)
        _, inv = np.unique(np.concatenate([c1, c0]), return_inverse=True)
    else:
        _, inv = np.unique(np.vstack([ws.class1, ws.class0]), axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    size = int(inv.max()) + 1
    return np.bincount(inv[:n1], minlength=size), np.bincount(inv[n1:], minlength=size)


def exact_tv(ws: WindowSet) -> float:
    """Total variation distance between the two window histograms.

    Computed as ``sum |c1*n0 - c0*n1| / (2*n1*n0)`` in integer arithmetic, so
    the only rounding is the final division.
    """
    p, q = window_histograms(ws)
    n1, n0 = int(p.sum()), int(q.sum())
    num = sum(abs(int(a) * n0 - int(b) * n1) for a, b in zip(p.tolist(), q.tolist()))
    return num / (2 * n1 * n0)


@dataclass(frozen=True)
class ExactOracle:
    """Supremum over every subset of a finite window domain."""

    kind: str = field(default="exact-tv-oracle", init=False)

    def estimate_summand(self, ws: WindowSet) -> float:
        return exact_tv(ws)


# --------------------------------------------------------------------------
# kernel SVM


@dataclass(frozen=True)
class SvmConfig:
    """Soft-margin SVM settings.

    ``bandwidth`` is the RBF coefficient in ``exp(-bandwidth * |u - v|^2)``;
    ``None`` means ``1 / (k*d)``. ``max_iterations=None`` means ten times the
    number of training windows. Example ``i`` of class ``c`` gets box bound
    ``cost * weight_c``.
    """

    kernel: str = "rbf"
    bandwidth: Optional[float] = None
    cost: float = 1.0
    max_iterations: Optional[int] = None
    tolerance: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.kernel not in ("rbf", "linear"):
            raise ValueError(f"unknown kernel {self.kernel!r}")
        if self.bandwidth is not None and not self.bandwidth > 0:
            raise ValueError("bandwidth must be positive")
        if not self.cost > 0:
            raise ValueError("cost must be positive")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be a positive integer")

    def gamma_for(self, width: int) -> float:
        return self.bandwidth if self.bandwidth is not None else 1.0 / width


class _Kernel:
    def __init__(self, kind: str, gamma: float):
        self.kind = kind
        self.gamma = gamma

    def block(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        dot = a @ b.T
        if self.kind == "linear":
            return dot
        dot *= -2.0
        dot += (a * a).sum(1)[:, None]
        dot += (b * b).sum(1)[None, :]
        np.maximum(dot, 0.0, out=dot)
        dot *= -self.gamma
        np.exp(dot, out=dot)
        return dot

    def diag(self, z: np.ndarray) -> np.ndarray:
        if self.kind == "linear":
            return (z * z).sum(1)
        return np.ones(z.shape[0])

    def sums(self, a: np.ndarray, b: np.ndarray):
        """Row and column sums of the kernel block between ``a`` and ``b``."""
        if self.kind == "linear":
            return a @ b.sum(0), b @ a.sum(0)
        rows = np.empty(a.shape[0])
        cols = np.zeros(b.shape[0])
        for s in range(0, a.shape[0], _CHUNK):
            blk = self.block(a[s:s + _CHUNK], b)
            rows[s:s + _CHUNK] = blk.sum(1)
            cols += blk.sum(0)
        return rows, cols


def _digest(a: np.ndarray) -> bytes:
    h = hashlib.blake2b(digest_size=16)
    h.update(str(a.shape).encode())
    h.update(np.ascontiguousarray(a, dtype=np.float64).tobytes())
    return h.digest()


class _SumCache:
    """Within-class kernel row sums, keyed by window content.

    A sample takes part in many pairs of a distance matrix; its within-sample
    kernel sums are the same in all of them.
    """

    def __init__(self, maxsize: int = 512):
        self.maxsize = maxsize
        self._data: "OrderedDict[tuple, np.ndarray]" = OrderedDict()

    def get(self, kernel: _Kernel, a: np.ndarray, key: bytes) -> np.ndarray:
        full = (kernel.kind, kernel.gamma, key)
        hit = self._data.get(full)
        if hit is not None:
            self._data.move_to_end(full)
            return hit
        rows, _ = kernel.sums(a, a)
        rows.setflags(write=False)
        self._data[full] = rows
        if len(self._data) > self.maxsize:
            self._data.popitem(last=False)
        return rows

    def clear(self):
        self._data.clear()


_within_cache = _SumCache()


@dataclass
class TrainedClassifier:
    """Decision rule ``h(v) = 1`` iff ``sum_t coef_t K(sv_t, v) - rho > 0``."""

    support_vectors: np.ndarray
    coef: np.ndarray
    rho: float
    kernel: str
    gamma: float
    iterations: int = 0
    objective: float = 0.0
    converged: bool = True
    train_decision: Optional[np.ndarray] = field(default=None, repr=False)
    n_class1: int = 0
    constant: Optional[int] = None

    def decision_function(self, windows: np.ndarray) -> np.ndarray:
        windows = np.atleast_2d(np.asarray(windows, dtype=np.float64))
        if self.constant is not None:
            return np.full(windows.shape[0], 1.0 if self.constant else -1.0)
        k = _Kernel(self.kernel, self.gamma)
        out = np.empty(windows.shape[0])
        for s in range(0, windows.shape[0], _CHUNK):
            out[s:s + _CHUNK] = k.block(windows[s:s + _CHUNK], self.support_vectors) @ self.coef
        return out - self.rho

    def predict(self, windows: np.ndarray) -> np.ndarray:
        return (self.decision_function(windows) > 0).astype(np.int64)

    __call__ = predict

    def train_labels(self) -> np.ndarray:
        return (self.train_decision > 0).astype(np.int64)

    def mean_gap(self) -> float:
        """``|mean h(class1) - mean h(class0)|`` on the training windows."""
        h = self.train_labels()
        return abs(h[: self.n_class1].mean() - h[self.n_class1:].mean())

    def weighted_risk(self) -> float:
        """Class-balanced training error: half the weighted risk of the reduction."""
        h = self.train_labels()
        miss1 = 1.0 - h[: self.n_class1].mean()
        miss0 = h[self.n_class1:].mean()
        return 0.5 * (miss1 + miss0)


def _select_pair(y, alpha, C, G):
    """Maximal violating pair; ties go to the lowest index."""
    v = -y * G
    up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
    low = ((y < 0) & (alpha < C)) | ((y > 0) & (alpha > 0))
    if not up.any() or not low.any():
        return -1, -1, 0.0
    vu = np.where(up, v, -np.inf)
    vl = np.where(low, v, np.inf)
    i = int(np.argmax(vu))
    j = int(np.argmin(vl))
    return i, j, vu[i] - vl[j]


def _two_variable_step(i, j, y, alpha, C, G, qii, qjj, qij):
    # q.. are entries of Q = yy' * K

    ai, aj, Ci, Cj = alpha[i], alpha[j], C[i], C[j]
    if y[i] != y[j]:
        quad = qii + qjj + 2.0 * qij
        if quad <= 0:
            quad = _TAU
        delta = (-G[i] - G[j]) / quad
        diff = ai - aj
        ni, nj = ai + delta, aj + delta
        if diff > 0:
            if nj < 0:
                nj, ni = 0.0, diff
        elif ni < 0:
            ni, nj = 0.0, -diff
        if diff > Ci - Cj:
            if ni > Ci:
                ni, nj = Ci, Ci - diff
        elif nj > Cj:
            nj, ni = Cj, Cj + diff
    else:
        quad = qii + qjj - 2.0 * qij
        if quad <= 0:
            quad = _TAU
        delta = (G[i] - G[j]) / quad
        total = ai + aj
        ni, nj = ai - delta, aj + delta
        if total > Ci:
            if ni > Ci:
                ni, nj = Ci, total - Ci
        elif nj < 0:
            nj, ni = 0.0, total
        if total > Cj:
            if nj > Cj:
                nj, ni = Cj, total - Cj
        elif ni < 0:
            ni, nj = 0.0, total
    return ni, nj


def _rho(y, alpha, C, G):
    yG = y * G
    at_upper = alpha >= C
    at_lower = alpha <= 0
    free = ~(at_upper | at_lower)
    if free.any():
        return float(yG[free].mean())
    ub_mask = (at_upper & (y < 0)) | (at_lower & (y > 0))
    lb_mask = (at_upper & (y > 0)) | (at_lower & (y < 0))
    ub = yG[ub_mask].min() if ub_mask.any() else np.inf
    lb = yG[lb_mask].max() if lb_mask.any() else -np.inf
    return float((ub + lb) / 2)


def _identical_multisets(a: np.ndarray, b: np.ndarray) -> bool:
    if a.shape != b.shape:
        return False
    if not np.array_equal(np.sort(a[:, 0]), np.sort(b[:, 0])):
        return False
    ia = np.lexsort(a.T[::-1])
    ib = np.lexsort(b.T[::-1])
    return bool(np.array_equal(a[ia], b[ib]))


def _as_real(ws: WindowSet):
    return (np.asarray(ws.class1, dtype=np.float64), np.asarray(ws.class0, dtype=np.float64))


def train_weighted_erm(cfg: SvmConfig, ws: WindowSet) -> TrainedClassifier:
    """Weighted soft-margin SVM trained by SMO.

    Solves the dual ``min 1/2 a'Qa - sum a`` subject to ``0 <= a_i <= C_i``
    and ``sum y_i a_i = 0``, with ``C_i = cost * weight_class(i)``. Because each
    class's bounds sum to ``cost``, the all-at-bound point is feasible and the
    solver starts there; its gradient needs only kernel row sums.
    """
    a, b = _as_real(ws)
    n1, n0 = a.shape[0], b.shape[0]
    if n1 == 0 or n0 == 0:
        raise ValueError("both classes need at least one window")
    gamma = cfg.gamma_for(ws.dim)
    z = np.vstack([a, b])
    if np.all(z == z[0]):
        return TrainedClassifier(
            z[:1], np.zeros(1), 0.0, cfg.kernel, gamma,
            train_decision=np.ones(n1 + n0), n_class1=n1, constant=1,
        )

    kern = _Kernel(cfg.kernel, gamma)
    y = np.concatenate([np.ones(n1), -np.ones(n0)])
    C = np.concatenate([np.full(n1, cfg.cost * ws.weight1), np.full(n0, cfg.cost * ws.weight0)])
    alpha = C.copy()

    # canonical orientation keeps the sums bit-identical under a class swap
    ka, kb = _digest(a), _digest(b)
    s11 = _within_cache.get(kern, a, ka)
    s00 = _within_cache.get(kern, b, kb)
    if ka <= kb:
        s10, s01 = kern.sums(a, b)
    else:
        s01, s10 = kern.sums(b, a)
    c1, c0 = C[0], C[n1]
    f = np.concatenate([c1 * s11 - c0 * s10, c1 * s01 - c0 * s00])
    G = y * f - 1.0
    qd = kern.diag(z)

    max_iter = cfg.max_iterations if cfg.max_iterations is not None else 10 * (n1 + n0)
    rows: "OrderedDict[int, np.ndarray]" = OrderedDict()
    max_rows = max(2, int(2e8 // (8 * z.shape[0])))

    def row(t):
        r = rows.get(t)
        if r is None:
            r = kern.block(z[t:t + 1], z)[0]
            rows[t] = r
            if len(rows) > max_rows:
                rows.popitem(last=False)
        return r

    it = 0
    converged = False
    while True:
        i, j, gap = _select_pair(y, alpha, C, G)
        if i < 0 or gap < cfg.tolerance:
            converged = True
            break
        if it >= max_iter:
            break
        it += 1
        ri, rj = row(i), row(j)
        ni, nj = _two_variable_step(i, j, y, alpha, C, G, qd[i], qd[j], y[i] * y[j] * ri[j])
        dai, daj = ni - alpha[i], nj - alpha[j]
        alpha[i], alpha[j] = ni, nj
        G += y * (y[i] * dai * ri + y[j] * daj * rj)

    rho = _rho(y, alpha, C, G)
    decision = y * (G + 1.0) - rho
    objective = 0.5 * float(alpha @ (G - 1.0))
    sv = alpha > 0
    return TrainedClassifier(
        support_vectors=z[sv], coef=(alpha * y)[sv], rho=rho, kernel=cfg.kernel, gamma=gamma,
        iterations=it, objective=objective, converged=converged,
        train_decision=decision, n_class1=n1,
    )


@dataclass(frozen=True)
class KernelSVM:
    """Summand estimate from the decision rule of a weighted kernel SVM."""

    config: SvmConfig = field(default_factory=SvmConfig)
    kind: str = field(default="kernel-svm", init=False)

    def estimate_summand(self, ws: WindowSet) -> float:
        a, b = _as_real(ws)
        if _identical_multisets(a, b):
            return 0.0
        return float(train_weighted_erm(self.config, ws).mean_gap())


SummandEstimator = Union[ExactOracle, KernelSVM]


def estimate_summand(est: SummandEstimator, ws: WindowSet) -> float:
    return est.estimate_summand(ws)


def clear_caches():
    """Drop cached within-sample kernel sums."""
    _within_cache.clear()
