"""Single-linkage agglomerative clustering over a dissimilarity matrix.

At every step the two clusters at minimal inter-cluster minimum distance
merge at that distance. Ties pick the pair whose (smaller representative
leaf id, larger representative leaf id) is lexicographically least, so the
merge table is reproducible across runs and platforms.
"""

from __future__ import annotations

from . import _kernels
from .errors import DataError
from .hierarchy import Dendrogram, DissimilarityMatrix


def single_linkage(m: DissimilarityMatrix) -> Dendrogram:
    if m.n < 2:
        raise DataError(f"single linkage needs at least 2 points, got {m.n}")
    merges = _kernels.single_linkage_merges(m.full())
    return Dendrogram(m.n, merges)
