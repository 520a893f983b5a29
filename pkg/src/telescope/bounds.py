"""Finite-sample error bounds for geometrically beta-mixing sources.

The bounds assume ``beta(rho, t) <= gamma**t``, weights ``w_k = 2**-k`` and
block lengths ``t_n = l_n = sqrt(n)`` (real-valued, not rounded). Logarithms
of ``epsilon`` are base 2 and the VC-dimension index ``-log2(eps)`` is rounded
up. Results are not clamped to [0, 1]; ``inf`` is returned on overflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union


def halfspace_vc(k: int) -> int:
    """VC dimension of halfspaces in R^k."""
    return k + 1


@dataclass(frozen=True)
class MixingBoundParams:
    gamma: float
    vc_dims: Callable[[int], int] = field(default=halfspace_vc)

    def __post_init__(self):
        if not 0 < self.gamma < 1:
            raise ValueError("gamma must lie in (0, 1)")

    def vc(self, k: int) -> int:
        d = int(self.vc_dims(k))
        if d < 1:
            raise ValueError("VC dimensions must be positive")
        return d


def _mixing_term(n: float, gamma: float, exponent: float) -> float:
    try:
        return n * gamma ** exponent
    except OverflowError:
        return math.inf


def _vc_term(n: float, d: int, eps: float) -> float:
    log_val = math.log(8.0) + 0.5 * (d + 1) * math.log(n) - math.sqrt(n) * eps * eps / 8.0
    try:
        return math.exp(log_val)
    except OverflowError:
        return math.inf


def q_bound(p: MixingBoundParams, n: int, k: int, epsilon: float) -> float:
    """Bound on the probability that the order-``k`` empirical sup deviates by more than ``epsilon``."""
    if n < 1 or k < 1 or not epsilon > 0:
        raise ValueError("need n >= 1, k >= 1 and epsilon > 0")
    root = math.sqrt(n)
    return _mixing_term(n, p.gamma, root - k) + _vc_term(n, p.vc(k), epsilon)


def delta(p: MixingBoundParams, n: int, epsilon: float) -> float:
    """Deviation bound for the whole telescope sum at accuracy ``epsilon``."""
    if n < 1:
        raise ValueError("n must be positive")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must be in (0,1)")
    depth = -math.log2(epsilon)
    index = max(1, math.ceil(depth))
    root = math.sqrt(n)
    return depth * (_mixing_term(n, p.gamma, root - depth) + _vc_term(n, p.vc(index), epsilon))


@dataclass(frozen=True)
class HomogeneityTypeI:
    epsilon: float
    n: int


@dataclass(frozen=True)
class HomogeneityTypeII:
    epsilon: float
    delta: float
    n: int


@dataclass(frozen=True)
class ClusteringKnownK:
    delta: float
    N: int
    n: int


@dataclass(frozen=True)
class ClusteringUnknownK:
    epsilon: float
    delta: float
    N: int
    n: int


Scenario = Union[HomogeneityTypeI, HomogeneityTypeII, ClusteringKnownK, ClusteringUnknownK]


def _separated(eps: float, sep: float):
    if not sep > eps:
        raise ValueError("separation must exceed threshold")


def theorem_bounds(p: MixingBoundParams, scenario: Scenario) -> float:
    """Failure-probability bound for a test or clustering scenario.

    Known-K clustering returns the failure probability ``N(N-1) Delta(delta/12, n)``;
    the success probability is one minus it.
    """
    match scenario:
        case HomogeneityTypeI(epsilon=eps, n=n):
            return 2 * delta(p, n, eps / 4)
        case HomogeneityTypeII(epsilon=eps, delta=sep, n=n):
            _separated(eps, sep)
            return 2 * delta(p, n, (sep - eps) / 4)
        case ClusteringKnownK(delta=sep, N=N, n=n):
            return N * (N - 1) * delta(p, n, sep / 12)
        case ClusteringUnknownK(epsilon=eps, delta=sep, N=N, n=n):
            _separated(eps, sep)
            return N * (N - 1) * max(delta(p, n, eps / 4), delta(p, n, (sep - eps) / 4))
    raise TypeError(f"unknown scenario {scenario!r}")
