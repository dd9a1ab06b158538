import numpy as np
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from geolam import kernels


def test_env_flag(monkeypatch):
    monkeypatch.setenv("GEOLAM_DISABLE_NUMBA", "1")
    assert not kernels.numba_enabled()
    monkeypatch.setenv("GEOLAM_DISABLE_NUMBA", "0")
    assert kernels.numba_enabled() == kernels.HAVE_NUMBA
    monkeypatch.delenv("GEOLAM_DISABLE_NUMBA")
    assert kernels.numba_enabled() == kernels.HAVE_NUMBA


@settings(max_examples=60, deadline=None)
@given(arrays(np.int64, st.integers(2, 80), elements=st.integers(1, 60)),
       arrays(np.int64, st.integers(1, 10), elements=st.integers(0, 70)))
def test_census_backends_agree(bden, lengths):
    assert np.array_equal(kernels.census_counts_numba(bden, lengths),
                          kernels.census_counts_numpy(bden, lengths))


def test_census_by_hand():
    # dens 1,3,2,3,1: pairs (1,3) (3,2) (2,3) (3,1); at n=2 no pair has both > 2
    bden = np.array([1, 3, 2, 3, 1])
    assert kernels.census_counts_numpy(bden, np.array([0, 1, 2, 3])).tolist() == [1, 3, 5, 5]


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, st.integers(2, 40), elements=st.floats(0, 0.25)))
def test_dlog_backends_agree(us):
    us = np.sort(us)
    a = kernels.dlog_margin_grid_numba(us)
    b = kernels.dlog_margin_grid_numpy(us)
    assert abs(a[0] - b[0]) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 12), st.data())
def test_ultrametric_backends_agree(n, data):
    vals = data.draw(arrays(np.int64, (n, n), elements=st.integers(0, 4)))
    depth = np.minimum(vals, vals.T)
    assert np.array_equal(kernels.ultrametric_violations_numba(depth),
                          kernels.ultrametric_violations_numpy(depth))
