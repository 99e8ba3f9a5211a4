"""Benchmark harness: repeated trials per (dataset, method), Welch tests
against the best method per dataset, and winning frequencies.

Every method sees the same bagged ensemble for a given seed (generation is
deterministic in the seed), so differences between methods come from the
fusion step alone. The value entering the comparison is the correlation of
the fused consensus itself; the correlation of its ultrametric projection
is recorded alongside for inspection.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

import numpy as np

from .ensemble import EnsembleConfig, generate_ensemble_from_matrix
from .errors import ConfigError, DataError
from .fusion import NAMED_FUSERS, renyi_fuse, sort_ensemble
from .genetic import GAConfig, evolve
from .hierarchy import cophenetic_matrix, cpcc, euclidean_dissimilarity, validate_data_matrix
from .linkage import single_linkage
from .stats import welch_t_test

METHODS = ("max", "euclid", "amean", "gmean", "hmean", "min", "genetic")


def validate_method(method: str) -> str:
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    return method


@dataclass(frozen=True)
class TrialRecord:
    dataset: str
    method: str
    seed: int
    cpcc_raw: float
    cpcc_ultrametric: float
    wall_time: float


@dataclass(frozen=True)
class ExperimentReport:
    datasets: tuple[str, ...]
    methods: tuple[str, ...]
    records: tuple[TrialRecord, ...]
    means: dict
    stds: dict
    best_method: dict
    significantly_different: dict
    winning_frequency: dict
    significance: float


def run_trials(
    data,
    method: str,
    repeats: int = 10,
    base_seed: int = 0,
    *,
    dataset: str = "data",
    ecfg: EnsembleConfig | None = None,
    gcfg: GAConfig | None = None,
) -> list[TrialRecord]:
    """One trial per seed base_seed..base_seed+repeats-1.

    Trial seed s re-seeds both the bagging streams and (for the genetic
    method) the GA, so any method replayed with the same seed consumes an
    identical ensemble.
    """
    validate_method(method)
    if repeats < 1:
        raise ConfigError(f"repeats must be >= 1, got {repeats}")
    ecfg = ecfg or EnsembleConfig()
    gcfg = gcfg or GAConfig()
    x = validate_data_matrix(data)
    e = euclidean_dissimilarity(x)
    records = []
    for s in range(base_seed, base_seed + repeats):
        t0 = time.perf_counter()
        members = generate_ensemble_from_matrix(e, replace(ecfg, seed=s))
        primitive = [m.completed_matrix for m in members]
        if method == "genetic":
            ga = evolve(sort_ensemble(primitive), e, replace(gcfg, seed=s))
            consensus = ga.consensus_matrix
            raw = ga.best_fitness
        else:
            consensus = renyi_fuse(primitive, NAMED_FUSERS[method])
            raw = cpcc(consensus, e)
        ultra = cophenetic_matrix(single_linkage(consensus))
        records.append(
            TrialRecord(
                dataset=dataset,
                method=method,
                seed=s,
                cpcc_raw=raw,
                cpcc_ultrametric=cpcc(ultra, e),
                wall_time=time.perf_counter() - t0,
            )
        )
    return records


def winning_frequency(samples: dict, significance: float = 0.01):
    """Per-method winning percentages from per-(dataset, method) samples.

    ``samples`` maps (dataset, method) to a sequence of scores. Per dataset
    the method with the highest mean is best; a method wins the dataset if
    it is best or not significantly different from the best (Welch test,
    two-sided). Returns (frequencies, best_method, significantly_different).
    """
    datasets = []
    methods = []
    for ds, m in samples:
        if ds not in datasets:
            datasets.append(ds)
        if m not in methods:
            methods.append(m)
    for ds in datasets:
        for m in methods:
            if (ds, m) not in samples:
                raise DataError(f"missing sample for dataset {ds!r}, method {m!r}")
    best_method = {}
    significantly_different = {}
    wins = {m: 0 for m in methods}
    for ds in datasets:
        means = {m: float(np.mean(samples[(ds, m)])) for m in methods}
        best = max(methods, key=lambda m: means[m])  # ties keep method order
        best_method[ds] = best
        for m in methods:
            if m == best:
                diff = False
            elif len(samples[(ds, m)]) < 2 or len(samples[(ds, best)]) < 2:
                # single-repeat cells carry no variance: only exact parity wins
                diff = means[m] != means[best]
            else:
                diff = welch_t_test(samples[(ds, m)], samples[(ds, best)], significance).significant
            significantly_different[(ds, m)] = diff
            if not diff:
                wins[m] += 1
    freq = {m: 100.0 * wins[m] / len(datasets) for m in methods}
    return freq, best_method, significantly_different


def summarize(records, significance: float = 0.01) -> ExperimentReport:
    """Aggregate trial records into a full report."""
    records = tuple(records)
    if not records:
        raise DataError("cannot summarize an empty set of trial records")
    datasets = []
    methods = []
    for r in records:
        if r.dataset not in datasets:
            datasets.append(r.dataset)
        if r.method not in methods:
            methods.append(r.method)
    samples = {}
    for r in records:
        samples.setdefault((r.dataset, r.method), []).append(r.cpcc_raw)
    means = {key: float(np.mean(vals)) for key, vals in samples.items()}
    stds = {key: float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0 for key, vals in samples.items()}
    freq, best_method, significantly_different = winning_frequency(samples, significance)
    return ExperimentReport(
        datasets=tuple(datasets),
        methods=tuple(methods),
        records=records,
        means=means,
        stds=stds,
        best_method=best_method,
        significantly_different=significantly_different,
        winning_frequency=freq,
        significance=significance,
    )
