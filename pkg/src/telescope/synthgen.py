"""Synthetic sources: the irrational-rotation Gaussian process and finite Markov chains."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import Sample

# irrational surrogates with the digits 0.31... and 0.35...
ALPHA_1 = np.longdouble("0.31") + np.sqrt(np.longdouble(2)) * np.longdouble("1e-4")
ALPHA_2 = np.longdouble("0.35") + np.sqrt(np.longdouble(2)) * np.longdouble("1e-4")

ROTATION_DIM = 3


@dataclass(frozen=True)
class RotationProcessSpec:
    """Parameters of the rotation process.

    ``r0=None`` draws the starting phase uniformly from ``seed``.
    """

    alpha: float
    length: int
    seed: int = 0
    mean0: float = 0.0
    mean1: float = 1.0
    variance: float = 0.25
    r0: Optional[float] = None

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if self.length < 1:
            raise ValueError("length must be positive")
        if not self.variance > 0:
            raise ValueError("variance must be positive")
        if self.r0 is not None and not 0 <= self.r0 < 1:
            raise ValueError("r0 must lie in [0, 1)")


def rotation_orbit(alpha, r0, n: int) -> np.ndarray:
    """Phases ``r_1..r_n`` with ``r_i = frac(r_{i-1} + alpha)``, in extended precision."""
    a = np.longdouble(alpha)
    steps = np.arange(1, n + 1, dtype=np.longdouble)
    r = np.longdouble(r0) + steps * a
    return r - np.floor(r)


def regime_labels(orbit: np.ndarray) -> np.ndarray:
    return (orbit >= 0.5).astype(np.int64)


def generate_rotation(spec: RotationProcessSpec, id: str = "") -> Sample:
    """Emit N(mean0, variance*I) while the phase is below 1/2, else N(mean1, variance*I).

    Uses numpy's PCG64 generator: one uniform draw for ``r0`` (unless fixed),
    then ``length x 3`` standard normals.
    """
    rng = np.random.default_rng(spec.seed)
    r0 = rng.random() if spec.r0 is None else spec.r0
    labels = regime_labels(rotation_orbit(spec.alpha, r0, spec.length))
    means = np.where(labels == 1, spec.mean1, spec.mean0)
    noise = rng.standard_normal((spec.length, ROTATION_DIM))
    return Sample(means[:, None] + np.sqrt(spec.variance) * noise, id=id)


@dataclass(frozen=True)
class MarkovSpec:
    transition: tuple
    initial: tuple
    length: int
    seed: int = 0
    alphabet: Optional[tuple] = field(default=None)

    def __post_init__(self):
        P = np.asarray(self.transition, dtype=np.float64)
        pi = np.asarray(self.initial, dtype=np.float64)
        if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] < 1:
            raise ValueError("transition matrix must be square")
        if np.any(P < 0) or np.any(np.abs(P.sum(1) - 1) > 1e-12):
            raise ValueError("non-stochastic matrix")
        if pi.shape != (P.shape[0],) or np.any(pi < 0) or abs(pi.sum() - 1) > 1e-12:
            raise ValueError("initial distribution must be a probability vector over the states")
        if self.length < 1:
            raise ValueError("length must be positive")
        alphabet = tuple(range(P.shape[0])) if self.alphabet is None else tuple(int(a) for a in self.alphabet)
        if len(alphabet) != P.shape[0] or len(set(alphabet)) != len(alphabet):
            raise ValueError("alphabet must name each state once")
        object.__setattr__(self, "transition", tuple(map(tuple, P.tolist())))
        object.__setattr__(self, "initial", tuple(pi.tolist()))
        object.__setattr__(self, "alphabet", alphabet)


def generate_markov(spec: MarkovSpec, id: str = "") -> Sample:
    """Simulate the chain by inverse-CDF sampling from ``length`` uniforms."""
    rng = np.random.default_rng(spec.seed)
    u = rng.random(spec.length)
    init_cdf = np.cumsum(spec.initial)
    cdf = np.cumsum(np.asarray(spec.transition), axis=1)
    last = len(spec.initial) - 1
    states = np.empty(spec.length, dtype=np.int64)
    s = min(int(np.searchsorted(init_cdf, u[0], side="right")), last)
    states[0] = s
    rows = [row.tolist() for row in cdf]
    for t in range(1, spec.length):
        row = rows[s]
        ut = u[t]
        s = 0
        while s < last and ut >= row[s]:
            s += 1
        states[t] = s
    codes = np.asarray(spec.alphabet, dtype=np.int64)[states]
    return Sample(codes, alphabet=spec.alphabet, id=id)


def binary_chain(p_from0: float, p_from1: float, length: int, seed: int = 0,
                 initial: Sequence[float] = (0.5, 0.5), id: str = "") -> Sample:
    """Two-state chain given its probabilities of moving to state 1 from 0 and from 1."""
    P = ((1 - p_from0, p_from0), (1 - p_from1, p_from1))
    return generate_markov(MarkovSpec(P, tuple(initial), length, seed), id=id)
