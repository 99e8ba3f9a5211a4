"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

Set HCFUSE_NO_NUMBA=1 to force the numpy implementations (also used
automatically when numba is not importable). Both paths perform identical
comparisons and copy/min operations only, so they produce bit-identical
results; ``benchmarks/bench_kernels.py`` compares their speed.

Kernels:
  * single_linkage_merges -- agglomerative merge table from a square
    distance matrix (nearest-distance bookkeeping, O(n^2) total).
  * cophenetic_condensed  -- condensed pair-join-height matrix from a
    merge table (DFS leaf spans, O(n^2) total).
  * ultrametric_ok        -- exhaustive triple check of the ultrametric
    inequality, O(n^3).
"""

from __future__ import annotations

import os

import numpy as np

_FORCED_OFF = os.environ.get("HCFUSE_NO_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _FORCED_OFF:
        raise ImportError("numba disabled via HCFUSE_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


# ---------------------------------------------------------------------------
# single linkage
#
# Nearest-distance values per cluster never change under a single-linkage
# merge (the merged row is the elementwise min of its parents), so one O(n)
# rescan per step suffices. Ties are broken by the lexicographically smallest
# (smaller representative leaf id, larger representative leaf id) pair, where
# a cluster's representative is its smallest leaf.
# ---------------------------------------------------------------------------


@njit(cache=True)
def _nb_single_linkage(d):
    n = d.shape[0]
    inf = np.inf
    rep = np.arange(n)
    cid = np.arange(n)
    size = np.ones(n, np.int64)
    active = np.ones(n, np.bool_)
    for i in range(n):
        d[i, i] = inf
    nndist = np.empty(n)
    for i in range(n):
        lo = inf
        for j in range(n):
            if d[i, j] < lo:
                lo = d[i, j]
        nndist[i] = lo
    merges = np.empty((n - 1, 4))
    for t in range(n - 1):
        gmin = inf
        for s in range(n):
            if active[s] and nndist[s] < gmin:
                gmin = nndist[s]
        a = -1
        for s in range(n):
            if active[s] and nndist[s] == gmin and (a < 0 or rep[s] < rep[a]):
                a = s
        b = -1
        for s in range(n):
            if active[s] and s != a and d[a, s] == gmin and (b < 0 or rep[s] < rep[b]):
                b = s
        merges[t, 0] = cid[a]
        merges[t, 1] = cid[b]
        merges[t, 2] = gmin
        merges[t, 3] = size[a] + size[b]
        for s in range(n):
            v = d[b, s]
            if v < d[a, s]:
                d[a, s] = v
                d[s, a] = v
            d[b, s] = inf
            d[s, b] = inf
        d[a, a] = inf
        active[b] = False
        nndist[b] = inf
        size[a] += size[b]
        if rep[b] < rep[a]:
            rep[a] = rep[b]
        cid[a] = n + t
        lo = inf
        for s in range(n):
            if active[s] and s != a and d[a, s] < lo:
                lo = d[a, s]
        nndist[a] = lo
    return merges


def _py_single_linkage(d):
    n = d.shape[0]
    inf = np.inf
    rep = np.arange(n)
    cid = np.arange(n)
    size = np.ones(n, np.int64)
    np.fill_diagonal(d, inf)
    nndist = d.min(axis=1)
    big_rep = np.int64(n)
    merges = np.empty((n - 1, 4))
    for t in range(n - 1):
        gmin = nndist.min()
        a = int(np.argmin(np.where(nndist == gmin, rep, big_rep)))
        partner = d[a] == gmin
        b = int(np.argmin(np.where(partner, rep, big_rep)))
        merges[t] = (cid[a], cid[b], gmin, size[a] + size[b])
        row = np.minimum(d[a], d[b])
        d[a, :] = row
        d[:, a] = row
        d[a, a] = inf
        d[b, :] = inf
        d[:, b] = inf
        nndist[b] = inf
        size[a] += size[b]
        rep[a] = min(rep[a], rep[b])
        cid[a] = n + t
        nndist[a] = d[a].min()
    return merges


# ---------------------------------------------------------------------------
# cophenetic matrix
# ---------------------------------------------------------------------------


@njit(cache=True)
def _nb_cophenetic(left, right, heights, n):
    total = 2 * n - 1
    order = np.empty(n, np.int64)
    start = np.empty(total, np.int64)
    end = np.empty(total, np.int64)
    stack = np.empty(total, np.int64)
    top = 0
    stack[top] = total - 1
    k = 0
    while top >= 0:
        v = stack[top]
        top -= 1
        if v < n:
            start[v] = k
            end[v] = k + 1
            order[k] = v
            k += 1
        else:
            stack[top + 1] = left[v - n]
            stack[top + 2] = right[v - n]
            top += 2
    for t in range(n - 1):
        c1 = left[t]
        c2 = right[t]
        s = start[c1] if start[c1] < start[c2] else start[c2]
        e = end[c1] if end[c1] > end[c2] else end[c2]
        start[n + t] = s
        end[n + t] = e
    cond = np.empty(n * (n - 1) // 2)
    for t in range(n - 1):
        h = heights[t]
        c1 = left[t]
        c2 = right[t]
        for ia in range(start[c1], end[c1]):
            i = order[ia]
            base = n * i - i * (i + 1) // 2 - i - 1
            for ib in range(start[c2], end[c2]):
                j = order[ib]
                if i < j:
                    cond[base + j] = h
                else:
                    cond[n * j - j * (j + 1) // 2 + i - j - 1] = h
    return cond


def _py_cophenetic(left, right, heights, n):
    total = 2 * n - 1
    order = np.empty(n, np.int64)
    start = np.empty(total, np.int64)
    end = np.empty(total, np.int64)
    stack = [total - 1]
    k = 0
    while stack:
        v = stack.pop()
        if v < n:
            start[v] = k
            end[v] = k + 1
            order[k] = v
            k += 1
        else:
            stack.append(left[v - n])
            stack.append(right[v - n])
    for t in range(n - 1):
        c1, c2 = left[t], right[t]
        start[n + t] = min(start[c1], start[c2])
        end[n + t] = max(end[c1], end[c2])
    cond = np.empty(n * (n - 1) // 2)
    for t in range(n - 1):
        c1, c2 = left[t], right[t]
        a = order[start[c1]:end[c1]]
        b = order[start[c2]:end[c2]]
        lo = np.minimum(a[:, None], b[None, :])
        hi = np.maximum(a[:, None], b[None, :])
        idx = n * lo - lo * (lo + 1) // 2 + hi - lo - 1
        cond[idx.ravel()] = heights[t]
    return cond


# ---------------------------------------------------------------------------
# ultrametric inequality check
# ---------------------------------------------------------------------------


@njit(cache=True)
def _nb_ultrametric_ok(d, tol):
    n = d.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            lim = d[i, j] - tol
            for k in range(n):
                a = d[i, k]
                b = d[k, j]
                m = a if a > b else b
                if m < lim:
                    return False
    return True


def _py_ultrametric_ok(d, tol):
    n = d.shape[0]
    for k in range(n):
        bound = np.maximum(d[:, k][:, None], d[k, :][None, :]) + tol
        if (d > bound).any():
            return False
    return True


if HAVE_NUMBA:
    single_linkage_merges = _nb_single_linkage
    _cophenetic_impl = _nb_cophenetic
    ultrametric_ok = _nb_ultrametric_ok
else:
    single_linkage_merges = _py_single_linkage
    _cophenetic_impl = _py_cophenetic
    ultrametric_ok = _py_ultrametric_ok


def cophenetic_condensed(left, right, heights, n):
    return _cophenetic_impl(
        np.ascontiguousarray(left, dtype=np.int64),
        np.ascontiguousarray(right, dtype=np.int64),
        np.ascontiguousarray(heights, dtype=np.float64),
        n,
    )
