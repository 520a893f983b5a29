import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_sup
from telescope.classifiers import ExactOracle, KernelSVM, SvmConfig
from telescope.core import DepthPolicy, Sample, WeightScheme, extract_windows
from telescope.distance import DistanceMatrix, TelescopeConfig, distance_matrix, summands, telescope_distance
from telescope.synthgen import binary_chain

X = Sample.discrete("0101010101", id="x")
Y = Sample.discrete("0000000000", id="y")
ORACLE = TelescopeConfig.oracle()


def test_binary_example_is_three_quarters():
    assert telescope_distance(ORACLE, X, Y) == 0.75
    assert telescope_distance(ORACLE, Y, X) == 0.75
    assert [(k, w, s) for k, w, s in summands(ORACLE, X, Y)] == [(1, 1.0, 0.5), (2, 0.25, 1.0)]


def test_binary_example_by_brute_force():
    total = 0.0
    for k, w in ((1, 1.0), (2, 0.25)):
        ws = extract_windows(X, Y, k)
        total += w * brute_force_sup(ws.class1, ws.class0, ws.alphabet)
    assert total == 0.75


def test_self_distance_zero():
    assert telescope_distance(ORACLE, X, X) == 0.0
    rng = np.random.default_rng(0)
    s = Sample(rng.normal(size=(300, 2)))
    assert telescope_distance(TelescopeConfig(), s, s) == 0.0


def test_geometric_full_depth_bounded_by_one():
    cfg = TelescopeConfig.oracle(WeightScheme.geometric(), DepthPolicy.full())
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = Sample(rng.integers(0, 3, 40), alphabet=(0, 1, 2))
        b = Sample(rng.integers(0, 3, 25), alphabet=(0, 1, 2))
        assert 0.0 <= telescope_distance(cfg, a, b) <= 1.0
    disjoint = telescope_distance(cfg, Sample.discrete("1" * 30, (0, 1)), Sample.discrete("0" * 30, (0, 1)))
    assert disjoint == pytest.approx(1 - 2.0 ** -30, abs=1e-15)


def test_custom_weights_stop_at_list_end():
    cfg = TelescopeConfig.oracle(WeightScheme.custom([0.5]), DepthPolicy.full())
    assert len(summands(cfg, X, Y)) == 1
    assert telescope_distance(cfg, X, Y) == 0.25


def test_depth_uses_shorter_sample():
    long_x = Sample.discrete("01" * 500)
    assert len(summands(ORACLE, long_x, Y)) == 2


def test_dimension_mismatch():
    with pytest.raises(ValueError, match="incompatible samples"):
        telescope_distance(TelescopeConfig(), Sample(np.zeros(5)), Sample(np.zeros((5, 2))))


def test_oracle_on_continuous_data_propagates():
    with pytest.raises(ValueError, match="oracle requires discrete alphabet"):
        telescope_distance(ORACLE, Sample([0.5, 1.5, 2.0]), Sample([0.1, 0.2, 0.3]))


def test_matrix_examples():
    x2 = Sample.discrete("0101010101", id="x2")
    dm = distance_matrix(ORACLE, [X, Y, x2])
    assert dm.ids == ("x", "y", "x2")
    assert dm.values[0, 2] == 0.0
    assert dm.values[0, 1] == dm.values[2, 1] == 0.75
    np.testing.assert_array_equal(dm.values, dm.values.T)

    two = distance_matrix(ORACLE, [X, Y], ids=["a", "b"])
    assert two.values.tolist() == [[0.0, 0.75], [0.75, 0.0]]

    same = distance_matrix(ORACLE, [X, X, X], ids=["a", "b", "c"])
    assert not same.values.any()


def test_matrix_computes_each_pair_once():
    calls = []
    samples = [binary_chain(0.3, 0.6, 50, seed=s, id=f"s{s}") for s in range(5)]
    distance_matrix(ORACLE, samples, progress=lambda done, total: calls.append((done, total)))
    assert calls == [(i, 10) for i in range(1, 11)]


def test_distance_matrix_validation():
    with pytest.raises(ValueError):
        DistanceMatrix(("a", "b"), np.array([[0.0, 1.0], [0.5, 0.0]]))
    with pytest.raises(ValueError):
        DistanceMatrix(("a", "a"), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        DistanceMatrix(("a", "b"), np.array([[0.1, 0.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        distance_matrix(ORACLE, [X])


@st.composite
def equal_length_triple(draw):
    a = draw(st.integers(2, 3))
    n = draw(st.integers(3, 60))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    alphabet = tuple(range(a))
    return [Sample(rng.integers(0, a, n), alphabet=alphabet) for _ in range(3)]


@settings(max_examples=60, deadline=None)
@given(triple=equal_length_triple())
def test_pseudometric_axioms(triple):
    x, y, z = triple
    dxy, dyz, dxz = (telescope_distance(ORACLE, *p) for p in ((x, y), (y, z), (x, z)))
    assert telescope_distance(ORACLE, y, x) == dxy
    assert telescope_distance(ORACLE, x, x) == 0.0
    assert dxz <= dxy + dyz + 1e-12


def test_svm_distance_symmetric_and_deterministic():
    rng = np.random.default_rng(4)
    a, b = Sample(rng.normal(size=(250, 3))), Sample(rng.normal(0.3, 1, size=(250, 3)))
    cfg = TelescopeConfig(estimator=KernelSVM(SvmConfig(cost=5.0)))
    d1 = telescope_distance(cfg, a, b)
    assert telescope_distance(cfg, b, a) == d1
    assert telescope_distance(cfg, a, b) == d1
    assert d1 > 0


def test_discrimination_grows_with_length():
    gaps = []
    for n in (100, 1000, 10000):
        g = []
        for s in range(20):
            a, b = binary_chain(0.2, 0.8, n, seed=4 * s), binary_chain(0.2, 0.8, n, seed=4 * s + 1)
            c, d = binary_chain(0.8, 0.2, n, seed=4 * s + 2), binary_chain(0.8, 0.2, n, seed=4 * s + 3)
            cross = telescope_distance(ORACLE, a, c) + telescope_distance(ORACLE, b, d)
            within = telescope_distance(ORACLE, a, b) + telescope_distance(ORACLE, c, d)
            g.append((cross - within) / 2)
        gaps.append(np.mean(g))
    assert gaps[0] > 0
    assert gaps[0] < gaps[1] < gaps[2]


def test_exact_oracle_class_is_default_for_oracle_config():
    assert isinstance(ORACLE.estimator, ExactOracle)
    assert isinstance(TelescopeConfig().estimator, KernelSVM)
