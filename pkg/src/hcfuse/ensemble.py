"""Bagged single-linkage ensembles.

Each member clusters a random subsample (without replacement) of the data
and is then completed to a full-size join-height matrix: every out-of-bag
point is attached at distance zero to its nearest in-bag neighbor under the
Euclidean matrix, i.e. it inherits that neighbor's row. Duplicating a point
this way keeps the completed matrix ultrametric.

Member l draws from its own stream ``default_rng([seed, l])`` so the
ensemble is reproducible and members are independent of evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError
from .hierarchy import (
    Dendrogram,
    DissimilarityMatrix,
    cophenetic_matrix,
    condensed_size,
    euclidean_dissimilarity,
    validate_data_matrix,
)
from .linkage import single_linkage


@dataclass(frozen=True)
class EnsembleConfig:
    ensemble_size: int = 10
    bag_fraction: float = 0.8
    seed: int = 0

    def __post_init__(self):
        if self.ensemble_size < 2:
            raise ConfigError(f"ensemble_size must be >= 2, got {self.ensemble_size}")
        if not (0.0 < self.bag_fraction <= 1.0):
            raise ConfigError(f"bag_fraction must be in (0, 1], got {self.bag_fraction}")
        if self.seed < 0:
            raise ConfigError(f"seed must be nonnegative, got {self.seed}")


@dataclass(frozen=True, eq=False)
class BaggedHierarchy:
    sampled_indices: np.ndarray
    dendrogram: Dendrogram
    completed_matrix: DissimilarityMatrix


def bag_indices(n: int, fraction: float, rng: np.random.Generator) -> np.ndarray:
    """Sorted uniform subsample of ceil(fraction * n) indices, no replacement."""
    if not (0.0 < fraction <= 1.0):
        raise ConfigError(f"bag fraction must be in (0, 1], got {fraction}")
    m = math.ceil(fraction * n)
    if m < 3:
        raise ConfigError(f"bag of {m} points is too small; need at least 3 (n={n})")
    picked = rng.choice(n, size=m, replace=False)
    picked.sort()
    return picked.astype(np.int64)


def complete_cd_matrix(
    dendrogram: Dendrogram, sampled, e: DissimilarityMatrix
) -> DissimilarityMatrix:
    """Extend a subsample's join-height matrix to all n points.

    Each out-of-bag point duplicates its nearest in-bag neighbor: zero
    distance to the neighbor, the neighbor's distances to everything else.
    """
    idx = np.asarray(sampled, dtype=np.int64)
    if dendrogram.n != idx.shape[0]:
        raise DataError(
            f"dendrogram covers {dendrogram.n} points but {idx.shape[0]} were sampled"
        )
    n = e.n
    in_bag = np.zeros(n, dtype=bool)
    in_bag[idx] = True
    rep_pos = np.empty(n, dtype=np.int64)
    rep_pos[idx] = np.arange(idx.shape[0])
    coph_full = cophenetic_matrix(dendrogram).full()
    for x in np.flatnonzero(~in_bag):
        rep_pos[x] = int(np.argmin(e.row(x)[idx]))
    out = np.empty(condensed_size(n))
    pos = 0
    for i in range(n - 1):
        out[pos:pos + n - 1 - i] = coph_full[rep_pos[i], rep_pos[i + 1:]]
        pos += n - 1 - i
    return DissimilarityMatrix(n, out)


def member_rng(seed: int, member: int) -> np.random.Generator:
    """Random stream for ensemble member ``member``."""
    return np.random.default_rng([seed, member])


def generate_ensemble(data, cfg: EnsembleConfig) -> list[BaggedHierarchy]:
    x = validate_data_matrix(data)
    e = euclidean_dissimilarity(x)
    return generate_ensemble_from_matrix(e, cfg)


def generate_ensemble_from_matrix(
    e: DissimilarityMatrix, cfg: EnsembleConfig
) -> list[BaggedHierarchy]:
    """Same as generate_ensemble but reusing a precomputed Euclidean matrix."""
    n = e.n
    if math.ceil(cfg.bag_fraction * n) < 3:
        raise ConfigError(
            f"bag_fraction {cfg.bag_fraction} leaves fewer than 3 of {n} points"
        )
    members = []
    for l in range(cfg.ensemble_size):
        rng = member_rng(cfg.seed, l)
        idx = bag_indices(n, cfg.bag_fraction, rng)
        dend = single_linkage(e.restrict(idx))
        completed = complete_cd_matrix(dend, idx, e)
        members.append(BaggedHierarchy(idx, dend, completed))
    return members
