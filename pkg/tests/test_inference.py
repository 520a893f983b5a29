import math

import numpy as np
import pytest

from telescope.core import DepthPolicy, Sample
from telescope.distance import TelescopeConfig
from telescope.inference import homogeneity_test, homogeneity_threshold, three_sample_test
from telescope.synthgen import binary_chain

ORACLE = TelescopeConfig.oracle()
X = Sample.discrete("0101010101")
Y = Sample.discrete("0000000000")


def test_copy_of_first_sample_matches_first():
    v = three_sample_test(ORACLE, X, Y, Sample.discrete("0101010101"))
    assert v.matches == "first" and v.d_zx == 0.0 < v.d_zy and not v.tie


def test_identical_references_tie():
    z = binary_chain(0.3, 0.6, 40, seed=1)
    v = three_sample_test(ORACLE, X, X, z)
    assert v.d_zx == v.d_zy and v.tie and v.matches == "first"


def test_markov_attribution_and_role_swap():
    correct = 0
    for s in range(30):
        x = binary_chain(0.2, 0.8, 1000, seed=3 * s)
        y = binary_chain(0.8, 0.2, 1000, seed=3 * s + 1)
        z = binary_chain(0.2, 0.8, 1000, seed=3 * s + 2)
        v = three_sample_test(ORACLE, x, y, z)
        w = three_sample_test(ORACLE, y, x, z)
        correct += v.matches == "first"
        if not v.tie:
            assert {v.matches, w.matches} == {"first", "second"}
            assert (v.d_zx, v.d_zy) == (w.d_zy, w.d_zx)
    assert correct >= 28


def test_verdict_invariant():
    rng = np.random.default_rng(0)
    for _ in range(20):
        x, y, z = (Sample(rng.integers(0, 2, 30), alphabet=(0, 1)) for _ in range(3))
        v = three_sample_test(ORACLE, x, y, z)
        assert (v.matches == "first") == (v.d_zx <= v.d_zy)
    assert set(v.to_dict()) == {"matches", "d_zx", "d_zy", "tie"}


def test_three_sample_dimension_check():
    with pytest.raises(ValueError, match="incompatible samples"):
        three_sample_test(TelescopeConfig(), Sample(np.zeros(5)), Sample(np.zeros(5)), Sample(np.zeros((5, 2))))


@pytest.mark.parametrize("n,exponent,expected", [(256, 1 / 8, 0.5), (1, 0.3, 1.0), (10**8, 1 / 8, 0.1)])
def test_threshold_examples(n, exponent, expected):
    assert homogeneity_threshold(n, exponent) == pytest.approx(expected, rel=1e-15)


def test_threshold_validation():
    with pytest.raises(ValueError):
        homogeneity_threshold(0)
    with pytest.raises(ValueError):
        homogeneity_threshold(10, 0.0)


def test_homogeneity_identical_samples():
    v = homogeneity_test(ORACLE, X, Sample.discrete("0101010101"))
    assert v.same_distribution and v.statistic == 0.0


def test_homogeneity_borderline_binary_pair():
    assert 10 ** (-1 / 8) < 0.75
    assert 10 ** (-1 / 8) == pytest.approx(0.7499, abs=1e-4)
    v = homogeneity_test(ORACLE, X, Y)
    assert v.statistic == 0.75 and not v.same_distribution


def test_homogeneity_is_strict():
    # statistic exactly at the threshold counts as different
    x, y = Sample.discrete("0" * 16), Sample.discrete("1" * 16)
    cfg = TelescopeConfig.oracle(depth=DepthPolicy.fixed(1))
    v = homogeneity_test(cfg, x, y, exponent=1e-300)
    assert v.statistic == 1.0 and v.threshold == 1.0 and not v.same_distribution


def test_homogeneity_exponent_monotone():
    for s in range(10):
        x = binary_chain(0.2, 0.8, 500, seed=2 * s)
        y = binary_chain(0.3, 0.7, 500, seed=2 * s + 1)
        verdicts = [homogeneity_test(ORACLE, x, y, e).same_distribution for e in (0.05, 0.1, 0.125, 0.2, 0.4)]
        # once different, it stays different as the exponent grows
        assert verdicts == sorted(verdicts, reverse=True)
        assert math.isclose(homogeneity_test(ORACLE, x, y, 0.1).threshold, 500 ** -0.1)
