"""Shared test utilities: independent oracles and random instance builders.

The oracles here deliberately use different algorithms from the package
(Floyd-Warshall-style closure, explicit double loops) so tests compare two
independent routes to the same value.
"""

import numpy as np

from hcfuse.hierarchy import Dendrogram, DissimilarityMatrix, condensed_size


def minmax_closure(square: np.ndarray) -> np.ndarray:
    """Min-max path closure: per pair, the minimum over paths of the largest
    edge. Floyd-Warshall recurrence, one pass over intermediate vertices."""
    c = square.copy()
    n = c.shape[0]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                step = max(c[i, k], c[k, j])
                if step < c[i, j]:
                    c[i, j] = step
    np.fill_diagonal(c, 0.0)
    return c


def random_matrix(rng, n, scale=10.0) -> DissimilarityMatrix:
    vals = rng.uniform(0.1, scale, size=condensed_size(n))
    return DissimilarityMatrix(n, vals)


def random_dendrogram(rng, n, tie_fraction=0.25) -> Dendrogram:
    """Random merge table: random active-pair choices, non-decreasing heights
    with occasional exact ties."""
    active = list(range(n))
    sizes = {i: 1 for i in range(n)}
    height = 0.0
    merges = np.empty((n - 1, 4))
    for t in range(n - 1):
        i, j = rng.choice(len(active), size=2, replace=False)
        if i > j:
            i, j = j, i
        left, right = active[i], active[j]
        if rng.random() > tie_fraction:
            height += float(rng.uniform(0.0, 1.0))
        new_id = n + t
        sizes[new_id] = sizes[left] + sizes[right]
        merges[t] = (left, right, height, sizes[new_id])
        active.pop(j)
        active.pop(i)
        active.append(new_id)
    return Dendrogram(n, merges)


def brute_force_euclidean(x: np.ndarray) -> np.ndarray:
    n = x.shape[0]
    out = np.empty(condensed_size(n))
    pos = 0
    for i in range(n):
        for j in range(i + 1, n):
            out[pos] = np.sqrt(((x[i] - x[j]) ** 2).sum())
            pos += 1
    return out


def pearson_abs(a: np.ndarray, b: np.ndarray) -> float:
    """Direct correlation formula over two entry vectors."""
    am, bm = a.mean(), b.mean()
    num = ((a - am) * (b - bm)).sum()
    den = np.sqrt(((a - am) ** 2).sum() * ((b - bm) ** 2).sum())
    return abs(num / den)
