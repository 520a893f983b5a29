"""Three-sample attribution and the threshold homogeneity test."""
from __future__ import annotations

from dataclasses import asdict, dataclass

from .core import Sample
from .distance import TelescopeConfig, telescope_distance

DEFAULT_EXPONENT = 1.0 / 8.0


@dataclass(frozen=True)
class ThreeSampleVerdict:
    matches: str
    d_zx: float
    d_zy: float
    tie: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class HomogeneityVerdict:
    same_distribution: bool
    statistic: float
    threshold: float

    def to_dict(self) -> dict:
        return asdict(self)


def three_sample_test(cfg: TelescopeConfig, x: Sample, y: Sample, z: Sample) -> ThreeSampleVerdict:
    """Attribute ``z`` to whichever of ``x``, ``y`` is nearer; a tie goes to ``x``."""
    if not (x.dim == y.dim == z.dim):
        raise ValueError("incompatible samples")
    d_zx = telescope_distance(cfg, z, x)
    d_zy = telescope_distance(cfg, z, y)
    return ThreeSampleVerdict("first" if d_zx <= d_zy else "second", d_zx, d_zy, tie=d_zx == d_zy)


def homogeneity_threshold(n: int, exponent: float = DEFAULT_EXPONENT) -> float:
    if n < 1:
        raise ValueError("n must be positive")
    if not exponent > 0:
        raise ValueError("exponent must be positive")
    return float(n) ** (-exponent)


def homogeneity_test(
    cfg: TelescopeConfig, x: Sample, y: Sample, exponent: float = DEFAULT_EXPONENT
) -> HomogeneityVerdict:
    """Declare the samples homogeneous when the distance falls strictly below
    ``min(len x, len y) ** -exponent``."""
    statistic = telescope_distance(cfg, x, y)
    threshold = homogeneity_threshold(min(len(x), len(y)), exponent)
    return HomogeneityVerdict(statistic < threshold, statistic, threshold)
