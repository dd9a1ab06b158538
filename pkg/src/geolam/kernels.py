"""Numeric inner loops, each with a numba and a pure-numpy implementation.

The dispatching functions use numba unless it is missing or the environment
variable ``GEOLAM_DISABLE_NUMBA`` is set to a non-empty value other than
``0``.  Both paths return identical results; ``benchmarks/bench_kernels.py``
times them against each other.
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def numba_enabled() -> bool:
    flag = os.environ.get("GEOLAM_DISABLE_NUMBA", "")
    return HAVE_NUMBA and flag in ("", "0")


def _njit(fn):
    if HAVE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn


# census of consecutive Farey neighbours

def census_counts_numpy(bden: np.ndarray, lengths: np.ndarray) -> np.ndarray:
    """Distinct factor-set cells hit by a sorted run of Farey neighbours.

    ``bden[i]`` is the beta denominator of the i-th sample slope.  Two
    neighbours share a cell at length n iff both denominators exceed n.
    """
    bden = np.asarray(bden, dtype=np.int64)
    out = np.empty(len(lengths), dtype=np.int64)
    left, right = bden[:-1], bden[1:]
    pair_min = np.minimum(left, right)
    pair_min.sort()
    # merges at length n = number of pairs with min(den) > n
    for i, n in enumerate(np.asarray(lengths, dtype=np.int64)):
        merges = len(pair_min) - np.searchsorted(pair_min, n, side="right")
        out[i] = len(bden) - merges
    return out


@_njit
def _census_counts_nb(bden, lengths):
    m = bden.shape[0]
    top = 0
    for k in range(m):
        top = max(top, bden[k])
    # hist[d] = pairs whose smaller denominator is d; merges(n) = pairs with d > n
    hist = np.zeros(top + 2, dtype=np.int64)
    for k in range(m - 1):
        hist[min(bden[k], bden[k + 1])] += 1
    above = np.zeros(top + 2, dtype=np.int64)
    for d in range(top, -1, -1):
        above[d] = above[d + 1] + hist[d + 1]
    out = np.empty(lengths.shape[0], dtype=np.int64)
    for i in range(lengths.shape[0]):
        n = lengths[i]
        out[i] = m - (above[n] if n <= top else 0)
    return out


def census_counts_numba(bden, lengths):
    return _census_counts_nb(np.asarray(bden, dtype=np.int64),
                             np.asarray(lengths, dtype=np.int64))


def census_counts(bden, lengths):
    if numba_enabled():
        return census_counts_numba(bden, lengths)
    return census_counts_numpy(bden, lengths)


# subadditivity margin of f(u) = -1/log u

def _f_numpy(u):
    u = np.asarray(u, dtype=np.float64)
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = -1.0 / np.log(u[pos])
    return out


def dlog_margin_grid_numpy(us: np.ndarray):
    """Minimum of f(u) + f(v) - f(u + v) over the grid ``us x us``.

    Returns ``(min, i, j)``.
    """
    us = np.asarray(us, dtype=np.float64)
    fu = _f_numpy(us)
    best, bi, bj = math.inf, -1, -1
    for i in range(len(us)):
        row = fu[i] + fu - _f_numpy(us[i] + us)
        j = int(np.argmin(row))
        if row[j] < best:
            best, bi, bj = float(row[j]), i, j
    return best, bi, bj


@_njit
def _f_scalar(u):
    if u <= 0.0:
        return 0.0
    return -1.0 / math.log(u)


@_njit
def _dlog_margin_nb(us):
    n = us.shape[0]
    best = np.inf
    bi = -1
    bj = -1
    for i in range(n):
        fi = _f_scalar(us[i])
        for j in range(n):
            h = fi + _f_scalar(us[j]) - _f_scalar(us[i] + us[j])
            if h < best:
                best = h
                bi = i
                bj = j
    return best, bi, bj


def dlog_margin_grid_numba(us):
    best, bi, bj = _dlog_margin_nb(np.asarray(us, dtype=np.float64))
    return float(best), int(bi), int(bj)


def dlog_margin_grid(us):
    if numba_enabled():
        return dlog_margin_grid_numba(us)
    return dlog_margin_grid_numpy(us)


# ultrametric triples on integer agreement depths

def ultrametric_violations_numpy(depth: np.ndarray) -> np.ndarray:
    """Triples (i, j, k), i < j < k, breaking the ultrametric inequality.

    ``depth[x, y]`` is the last agreeing length, so the distance is
    ``1/(depth+1)``; the inequality d(x,z) <= max(d(x,y), d(y,z)) reads
    depth[x,z] >= min(depth[x,y], depth[y,z]) for every choice of middle point.
    """
    depth = np.asarray(depth, dtype=np.int64)
    n = depth.shape[0]
    bad = []
    for i in range(n):
        for j in range(i + 1, n):
            k = np.arange(j + 1, n)
            if k.size == 0:
                continue
            dij, dik, djk = depth[i, j], depth[i, k], depth[j, k]
            ok = ((dik >= np.minimum(dij, djk))
                  & (djk >= np.minimum(dij, dik))
                  & (dij >= np.minimum(dik, djk)))
            for kk in k[~ok]:
                bad.append((i, j, int(kk)))
    return np.array(bad, dtype=np.int64).reshape(-1, 3)


@_njit
def _breaks(depth, i, j, k):
    dij = depth[i, j]
    dik = depth[i, k]
    djk = depth[j, k]
    return dik < min(dij, djk) or djk < min(dij, dik) or dij < min(dik, djk)


@_njit
def _ultra_nb(depth):
    n = depth.shape[0]
    count = 0
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if _breaks(depth, i, j, k):
                    count += 1
    out = np.empty((count, 3), dtype=np.int64)
    c = 0
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if _breaks(depth, i, j, k):
                    out[c, 0] = i
                    out[c, 1] = j
                    out[c, 2] = k
                    c += 1
    return out


def ultrametric_violations_numba(depth):
    return _ultra_nb(np.ascontiguousarray(depth, dtype=np.int64))


def ultrametric_violations(depth):
    if numba_enabled():
        return ultrametric_violations_numba(depth)
    return ultrametric_violations_numpy(depth)
