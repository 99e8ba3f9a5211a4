"""Consensus fusion of join-height matrices.

Two families live here. ``renyi_fuse`` normalizes each matrix to unit entry
sum and takes the per-entry power mean with exponent q = 1 - alpha, which
sweeps from entry-wise maximum (alpha = -inf) through root-mean-square,
arithmetic, geometric and harmonic means down to entry-wise minimum
(alpha = +inf). ``weighted_consensus`` blends the per-entry order statistics
of an ensemble (its sorted form) with simplex weights; the weights are what
the genetic search optimizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError
from .hierarchy import DissimilarityMatrix

# alpha values of the named fusers, in the fixed method order used everywhere
NAMED_FUSERS = {
    "max": -math.inf,
    "euclid": -1.0,
    "amean": 0.0,
    "gmean": 1.0,
    "hmean": 2.0,
    "min": math.inf,
}

ZERO_CLAMP = 1e-12
LOG_SPACE_Q = 8.0


@dataclass(frozen=True, eq=False)
class SortedEnsemble:
    """Per-entry order statistics of an ensemble: row k holds the k-th
    smallest value of each entry across members."""

    n: int
    stack: np.ndarray  # (L, P), rows ascending per column

    def __post_init__(self):
        s = np.asarray(self.stack, dtype=np.float64)
        if s.ndim != 2 or s.shape[0] < 2:
            raise DataError("sorted ensemble needs a (L>=2, pairs) stack")
        object.__setattr__(self, "stack", s)

    @property
    def size(self) -> int:
        return self.stack.shape[0]

    def member(self, k: int) -> DissimilarityMatrix:
        return DissimilarityMatrix(self.n, self.stack[k])

    @property
    def matrices(self) -> list[DissimilarityMatrix]:
        return [self.member(k) for k in range(self.size)]


def _as_stack(matrices) -> tuple[int, np.ndarray]:
    mats = list(matrices)
    if len(mats) < 2:
        raise DataError(f"need at least 2 matrices to fuse, got {len(mats)}")
    n = mats[0].n
    for m in mats[1:]:
        if m.n != n:
            raise DataError(f"matrix sizes differ: {m.n} vs {n}")
    return n, np.stack([m.values for m in mats])


def sort_ensemble(matrices) -> SortedEnsemble:
    """Redistribute each entry's values so member k holds the k-th order
    statistic."""
    n, stack = _as_stack(matrices)
    return SortedEnsemble(n, np.sort(stack, axis=0))


def normalized_stack(matrices) -> tuple[int, np.ndarray]:
    """Stack of matrices each scaled to unit entry sum (all-zero matrices
    are left as zeros)."""
    n, stack = _as_stack(matrices)
    sums = stack.sum(axis=1, keepdims=True)
    safe = np.where(sums > 0.0, sums, 1.0)
    return n, stack / safe


def renyi_fuse(matrices, alpha: float) -> DissimilarityMatrix:
    """Per-entry power mean of the unit-sum-normalized matrices.

    The exponent is q = 1 - alpha: alpha = -inf, -1, 0, 1, 2, +inf give the
    entry-wise maximum, root-mean-square, arithmetic, geometric and harmonic
    means, and the entry-wise minimum. Entries below 1e-12 are clamped up
    before reciprocal/logarithmic exponents (q <= 0).
    """
    alpha = float(alpha)
    if math.isnan(alpha):
        raise ConfigError("alpha must not be NaN")
    n, norm = normalized_stack(matrices)
    if alpha == math.inf:
        return DissimilarityMatrix(n, norm.min(axis=0))
    if alpha == -math.inf:
        return DissimilarityMatrix(n, norm.max(axis=0))
    q = 1.0 - alpha
    if q <= 0.0:
        norm = np.maximum(norm, ZERO_CLAMP)
    if q == 0.0:
        fused = np.exp(np.log(norm).mean(axis=0))
    elif abs(q) > LOG_SPACE_Q:
        # v**q over/underflows for large |q|; work with q*log(v) instead.
        # log(0) = -inf contributes exp(-inf) = 0 to the mean, as it should.
        with np.errstate(divide="ignore"):
            lv = q * np.log(norm)
        top = lv.max(axis=0)
        with np.errstate(invalid="ignore"):
            body = np.exp(lv - top)
        mean = np.where(np.isfinite(top), body.sum(axis=0) / norm.shape[0], 0.0)
        fused = np.where(
            np.isfinite(top), np.exp((top + np.log(np.maximum(mean, 1e-300))) / q), 0.0
        )
    else:
        fused = (np.power(norm, q).mean(axis=0)) ** (1.0 / q)
    return DissimilarityMatrix(n, fused)


def weighted_consensus(sorted_ensemble: SortedEnsemble, weights) -> DissimilarityMatrix:
    """Entry-wise weighted sum of the order-statistic matrices."""
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (sorted_ensemble.size,):
        raise ConfigError(
            f"need {sorted_ensemble.size} weights, got shape {w.shape}"
        )
    if (w < 0.0).any():
        raise ConfigError("weights must be nonnegative")
    if abs(w.sum() - 1.0) > 1e-9:
        raise ConfigError(f"weights must sum to 1 within 1e-9, got {w.sum()!r}")
    return DissimilarityMatrix(sorted_ensemble.n, w @ sorted_ensemble.stack)
