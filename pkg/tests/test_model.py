import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from svardag.model import (DagWeights, LaggedWeights, TimeSeries, build_lagged_design, is_dag,
                           threshold_support)


def test_lagged_design_one_lag():
    d = build_lagged_design(np.array([[1.0, 2.0, 3.0]]), 1)
    np.testing.assert_array_equal(d.x_eff, [[2, 3]])
    np.testing.assert_array_equal(d.y, [[1, 2]])
    assert d.m == 2


def test_lagged_design_two_lags():
    d = build_lagged_design(np.array([[1.0, 2.0, 3.0, 4.0]]), 2)
    np.testing.assert_array_equal(d.x_eff, [[3, 4]])
    np.testing.assert_array_equal(d.y, [[2, 3], [1, 2]])


def test_lagged_design_static_case(rng):
    x = rng.standard_normal((3, 7))
    d = build_lagged_design(TimeSeries(x), 0)
    np.testing.assert_array_equal(d.x_eff, x)
    assert d.y.shape == (0, 7)


def test_insufficient_samples():
    with pytest.raises(ValueError, match="insufficient samples"):
        build_lagged_design(np.ones((2, 3)), 3)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 4), t=st.integers(1, 12), p=st.integers(0, 4), seed=st.integers(0, 10**6))
def test_lagged_design_matches_index_arithmetic(n, t, p, seed):
    if t <= p:
        return
    x = np.random.default_rng(seed).standard_normal((n, t))
    d = build_lagged_design(x, p)
    m = t - p
    assert d.x_eff.shape == (n, m) and d.y.shape == (n * p, m)
    for j in range(m):
        assert np.array_equal(d.x_eff[:, j], x[:, p + j])
        for q in range(p):
            assert np.array_equal(d.y[q * n:(q + 1) * n, j], x[:, p + j - (q + 1)])


def test_is_dag_examples(rng):
    tri = np.tril(np.ones((5, 5), dtype=bool), k=-1)
    assert is_dag(tri)
    two_cycle = np.zeros((3, 3), dtype=bool)
    two_cycle[0, 1] = two_cycle[1, 0] = True
    assert not is_dag(two_cycle)
    perm = rng.permutation(5)
    assert is_dag(tri[np.ix_(perm, perm)])
    assert not is_dag(np.eye(2, dtype=bool))


@settings(max_examples=100, deadline=None)
@given(arrays(bool, (5, 5)), st.permutations(range(5)))
def test_is_dag_permutation_invariant(support, perm):
    perm = np.array(perm)
    assert is_dag(support) == is_dag(support[np.ix_(perm, perm)])


def test_threshold_support():
    w = np.array([[0.0, 0.3], [0.0, 0.0]])
    np.testing.assert_array_equal(threshold_support(w, 0.05), [[False, True], [False, False]])
    pos = np.array([[0.2, 0.1], [0.4, 1e-9]])
    assert threshold_support(pos, 0.0).all()
    assert not threshold_support(np.full((3, 3), 0.01), 0.05).any()
    assert threshold_support(np.array([[-0.3]]), 0.1)[0, 0]


def test_types_validate():
    with pytest.raises(ValueError):
        DagWeights(np.array([[0.0, -1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        DagWeights(np.eye(2))
    lw = LaggedWeights((np.ones((2, 2)), 2 * np.ones((2, 2))), 2)
    assert lw.stacked.shape == (4, 2)
    np.testing.assert_array_equal(LaggedWeights.from_stacked(lw.stacked, 2).mats[1], lw.mats[1])
    with pytest.raises(ValueError):
        TimeSeries(np.array([[np.nan]]))
