"""Core representations: dissimilarity matrices, dendrograms, and the
conversions between them.

A :class:`DissimilarityMatrix` stores the n(n-1)/2 upper-triangular entries
in condensed row-major order, pair (i, j) with i < j at index
``n*i - i*(i+1)//2 + (j - i - 1)``. A :class:`Dendrogram` is the usual merge
table: row t merges cluster ids ``left`` and ``right`` (leaves are 0..n-1,
the merge created by row t gets id n+t) at a non-decreasing ``height``.

The two forms are dual: every dendrogram maps to a cophenetic matrix (the
height at which each pair first shares a cluster), and every matrix whose
triples satisfy ``d_ij <= max(d_ik, d_kj)`` maps back to a dendrogram.
``subdominant_ultrametric`` projects an arbitrary matrix onto the closest
ultrametric from below, and ``cpcc`` scores how faithfully a join-height
matrix reflects a reference distance matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConfigError, DataError, UltrametricityError

DEFAULT_ULTRAMETRIC_TOL = 1e-9


def condensed_index(n: int, i, j):
    """Index of pair (i, j), i < j, in the condensed entry vector."""
    return n * i - i * (i + 1) // 2 + j - i - 1


def condensed_size(n: int) -> int:
    return n * (n - 1) // 2


def validate_data_matrix(data) -> np.ndarray:
    """Coerce to a float64 (n, m) feature matrix with n >= 3, all finite."""
    x = np.asarray(data, dtype=np.float64)
    if x.ndim != 2:
        raise DataError(f"data matrix must be 2-D, got shape {x.shape}")
    if x.shape[0] < 3:
        raise DataError(f"need at least 3 points, got {x.shape[0]}")
    if x.shape[1] < 1:
        raise DataError("data matrix has no feature columns")
    if not np.isfinite(x).all():
        raise DataError("data matrix contains non-finite values")
    return x


def _freeze(array: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(array, dtype=np.float64)
    if out is array:
        out = out.copy()
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class DissimilarityMatrix:
    """Symmetric nonnegative pairwise distances over n points, condensed."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        if self.n < 2:
            raise DataError(f"dissimilarity matrix needs n >= 2, got n={self.n}")
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 1 or vals.shape[0] != condensed_size(self.n):
            raise DataError(
                f"expected {condensed_size(self.n)} condensed entries for n={self.n}, "
                f"got shape {vals.shape}"
            )
        if not np.isfinite(vals).all():
            raise DataError("dissimilarity entries must be finite")
        if (vals < 0).any():
            raise DataError("dissimilarity entries must be nonnegative")
        object.__setattr__(self, "values", _freeze(vals))

    @classmethod
    def from_square(cls, square) -> "DissimilarityMatrix":
        sq = np.asarray(square, dtype=np.float64)
        if sq.ndim != 2 or sq.shape[0] != sq.shape[1]:
            raise DataError(f"square matrix expected, got shape {sq.shape}")
        n = sq.shape[0]
        if not np.allclose(sq, sq.T, rtol=0.0, atol=0.0, equal_nan=False):
            raise DataError("square dissimilarity matrix must be symmetric")
        if np.abs(np.diagonal(sq)).max(initial=0.0) != 0.0:
            raise DataError("square dissimilarity matrix must have a zero diagonal")
        cond = np.empty(condensed_size(n))
        pos = 0
        for i in range(n - 1):
            cond[pos:pos + n - 1 - i] = sq[i, i + 1:]
            pos += n - 1 - i
        return cls(n, cond)

    def get(self, i: int, j: int) -> float:
        if i == j:
            return 0.0
        if i > j:
            i, j = j, i
        return float(self.values[condensed_index(self.n, i, j)])

    def row(self, i: int) -> np.ndarray:
        """Full distance row of point i (length n, zero at i)."""
        n = self.n
        out = np.empty(n)
        out[i] = 0.0
        if i > 0:
            js = np.arange(i)
            out[:i] = self.values[condensed_index(n, js, i)]
        if i < n - 1:
            js = np.arange(i + 1, n)
            out[i + 1:] = self.values[condensed_index(n, i, js)]
        return out

    def full(self) -> np.ndarray:
        n = self.n
        sq = np.zeros((n, n))
        pos = 0
        for i in range(n - 1):
            run = self.values[pos:pos + n - 1 - i]
            sq[i, i + 1:] = run
            sq[i + 1:, i] = run
            pos += n - 1 - i
        return sq

    def restrict(self, indices) -> "DissimilarityMatrix":
        """Submatrix over the given strictly increasing point indices."""
        idx = np.asarray(indices, dtype=np.int64)
        if idx.ndim != 1 or idx.shape[0] < 2:
            raise DataError("restriction needs at least 2 indices")
        if (np.diff(idx) <= 0).any() or idx[0] < 0 or idx[-1] >= self.n:
            raise DataError("restriction indices must be strictly increasing and in range")
        m = idx.shape[0]
        out = np.empty(condensed_size(m))
        pos = 0
        for a in range(m - 1):
            i = idx[a]
            out[pos:pos + m - 1 - a] = self.values[condensed_index(self.n, i, idx[a + 1:])]
            pos += m - 1 - a
        return DissimilarityMatrix(m, out)


@dataclass(frozen=True, eq=False)
class Dendrogram:
    """Merge table over n leaves: rows of (left, right, height, size)."""

    n: int
    merges: np.ndarray

    def __post_init__(self):
        if self.n < 2:
            raise DataError(f"dendrogram needs n >= 2 leaves, got {self.n}")
        m = np.asarray(self.merges, dtype=np.float64)
        if m.shape != (self.n - 1, 4):
            raise DataError(f"expected merge table of shape {(self.n - 1, 4)}, got {m.shape}")
        n = self.n
        left = m[:, 0]
        right = m[:, 1]
        heights = m[:, 2]
        sizes = m[:, 3]
        ids = np.concatenate([left, right])
        if not (ids == np.floor(ids)).all() or not (sizes == np.floor(sizes)).all():
            raise DataError("cluster ids and sizes must be integral")
        consumed = np.zeros(2 * n - 1, dtype=bool)
        size_of = np.ones(2 * n - 1)
        for t in range(n - 1):
            li, ri = int(left[t]), int(right[t])
            for child in (li, ri):
                if child < 0 or child >= n + t:
                    raise DataError(f"merge {t} references invalid cluster id {child}")
                if consumed[child]:
                    raise DataError(f"cluster id {child} consumed twice (merge {t})")
                consumed[child] = True
            if li == ri:
                raise DataError(f"merge {t} joins cluster {li} with itself")
            size_of[n + t] = size_of[li] + size_of[ri]
            if size_of[n + t] != sizes[t]:
                raise DataError(
                    f"merge {t} records size {sizes[t]:g}, children total {size_of[n + t]:g}"
                )
        if (heights < 0).any() or not np.isfinite(heights).all():
            raise DataError("merge heights must be finite and nonnegative")
        if (np.diff(heights) < 0).any():
            raise DataError("merge heights must be non-decreasing")
        if size_of[2 * n - 2] != n:
            raise DataError("final merge does not cover all leaves")
        object.__setattr__(self, "merges", _freeze(m))

    @property
    def heights(self) -> np.ndarray:
        return self.merges[:, 2]


def euclidean_dissimilarity(data) -> DissimilarityMatrix:
    """Pairwise Euclidean distances between the rows of a data matrix."""
    x = validate_data_matrix(data)
    n = x.shape[0]
    out = np.empty(condensed_size(n))
    pos = 0
    for i in range(n - 1):
        diff = x[i + 1:] - x[i]
        np.sqrt((diff * diff).sum(axis=1), out=out[pos:pos + n - 1 - i])
        pos += n - 1 - i
    return DissimilarityMatrix(n, out)


def cophenetic_matrix(h: Dendrogram) -> DissimilarityMatrix:
    """Pair (i, j) gets the height of the first merge containing both."""
    m = h.merges
    cond = _kernels.cophenetic_condensed(m[:, 0], m[:, 1], m[:, 2], h.n)
    return DissimilarityMatrix(h.n, cond)


def is_ultrametric(m: DissimilarityMatrix, tolerance: float = DEFAULT_ULTRAMETRIC_TOL) -> bool:
    """Exhaustive triple check of d_ij <= max(d_ik, d_kj) + tolerance."""
    if tolerance < 0:
        raise ConfigError(f"tolerance must be nonnegative, got {tolerance}")
    return bool(_kernels.ultrametric_ok(m.full(), float(tolerance)))


def subdominant_ultrametric(m: DissimilarityMatrix) -> DissimilarityMatrix:
    """Largest ultrametric matrix elementwise below m.

    Equals the min-max path closure of m, obtained as the cophenetic matrix
    of single-linkage clustering on m.
    """
    from .linkage import single_linkage

    return cophenetic_matrix(single_linkage(m))


def dendrogram_from_ultrametric(
    u: DissimilarityMatrix, tolerance: float = DEFAULT_ULTRAMETRIC_TOL
) -> Dendrogram:
    """Recover a merge table whose cophenetic matrix reproduces u.

    Raises UltrametricityError when u is not ultrametric within tolerance
    (its subdominant deviates by more than tolerance), since no dendrogram
    can represent such a matrix; apply subdominant_ultrametric first.
    """
    from .linkage import single_linkage

    dend = single_linkage(u)
    recon = cophenetic_matrix(dend)
    gap = float(np.abs(recon.values - u.values).max(initial=0.0))
    if gap > tolerance:
        raise UltrametricityError(
            f"matrix is not ultrametric within {tolerance:g} (deviation {gap:g}); "
            "apply subdominant_ultrametric first"
        )
    return dend


def cpcc(a: DissimilarityMatrix, e: DissimilarityMatrix) -> float:
    """Absolute Pearson correlation of the condensed entries of two matrices.

    Returns 0.0 when either matrix has zero variance over its entries.
    """
    if a.n != e.n:
        raise DataError(f"matrix sizes differ: {a.n} vs {e.n}")
    av = a.values - a.values.mean()
    ev = e.values - e.values.mean()
    den2 = float(av @ av) * float(ev @ ev)
    if den2 <= 0.0:
        return 0.0
    r = abs(float(av @ ev)) / math.sqrt(den2)
    return min(r, 1.0)
