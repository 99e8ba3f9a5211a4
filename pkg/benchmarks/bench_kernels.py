#!/usr/bin/env python3
"""Side-by-side timing of the numba kernels against the numpy fallbacks.

The two paths compute identical results (comparisons and copies only), so
this also asserts bitwise equality while timing. Run directly:

    python benchmarks/bench_kernels.py [--sizes 200,500,1000]

Setting HCFUSE_NO_NUMBA=1 in the environment selects the numpy path inside
the package; this script imports both implementations explicitly, so it runs
the comparison regardless of the flag.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from hcfuse import _kernels
from hcfuse.hierarchy import condensed_size


def timed(make_call, repeat=3):
    """Best-of-N timing; make_call must build fresh arguments, because the
    single-linkage kernel consumes its input matrix."""
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = make_call()
        best = min(best, time.perf_counter() - t0)
    return best, result


def random_square(rng, n):
    vals = rng.uniform(0.1, 10.0, size=condensed_size(n))
    sq = np.zeros((n, n))
    iu = np.triu_indices(n, 1)
    sq[iu] = vals
    return sq + sq.T


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="200,500,1000",
                        help="comma-separated point counts")
    parser.add_argument("--ultrametric-cap", type=int, default=400,
                        help="skip the O(n^3) check above this size")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if not _kernels.HAVE_NUMBA:
        print("numba unavailable or disabled; timing the numpy path against itself")

    rng = np.random.default_rng(0)
    warm = random_square(rng, 50)
    _kernels.single_linkage_merges(warm.copy())  # JIT warmup outside timings
    merges = _kernels.single_linkage_merges(random_square(rng, 50))
    _kernels.cophenetic_condensed(merges[:, 0], merges[:, 1], merges[:, 2], 50)
    _kernels.ultrametric_ok(warm, 1e-9)

    header = f"{'kernel':<22} {'n':>6} {'numpy (s)':>10} {'numba (s)':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        sq = random_square(rng, n)

        nb_linkage = _kernels._nb_single_linkage if _kernels.HAVE_NUMBA else _kernels._py_single_linkage
        t_py, m_py = timed(lambda: _kernels._py_single_linkage(sq.copy()))
        t_nb, m_nb = timed(lambda: nb_linkage(sq.copy()))
        assert np.array_equal(m_py, m_nb), "single-linkage paths disagree"
        print(f"{'single_linkage':<22} {n:>6} {t_py:>10.4f} {t_nb:>10.4f} {t_py / t_nb:>7.1f}x")

        left = m_py[:, 0].astype(np.int64)
        right = m_py[:, 1].astype(np.int64)
        heights = m_py[:, 2]
        nb_coph = _kernels._nb_cophenetic if _kernels.HAVE_NUMBA else _kernels._py_cophenetic
        t_py, c_py = timed(lambda: _kernels._py_cophenetic(left, right, heights, n))
        t_nb, c_nb = timed(lambda: nb_coph(left, right, heights, n))
        assert np.array_equal(c_py, c_nb), "cophenetic paths disagree"
        print(f"{'cophenetic_condensed':<22} {n:>6} {t_py:>10.4f} {t_nb:>10.4f} {t_py / t_nb:>7.1f}x")

        if n <= args.ultrametric_cap:
            sq_u = np.zeros((n, n))
            iu = np.triu_indices(n, 1)
            sq_u[iu] = c_py
            sq_u += sq_u.T
            nb_ultra = _kernels._nb_ultrametric_ok if _kernels.HAVE_NUMBA else _kernels._py_ultrametric_ok
            t_py, ok_py = timed(lambda: _kernels._py_ultrametric_ok(sq_u, 1e-9))
            t_nb, ok_nb = timed(lambda: nb_ultra(sq_u, 1e-9))
            assert ok_py == ok_nb == True  # noqa: E712  (cophenetic output is ultrametric)
            print(f"{'ultrametric_ok':<22} {n:>6} {t_py:>10.4f} {t_nb:>10.4f} {t_py / t_nb:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
