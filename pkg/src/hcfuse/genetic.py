"""Genetic search for consensus weights.

Chromosomes are points on the simplex: L nonnegative weights summing to 1,
one per order-statistic matrix. Fitness is the absolute Pearson correlation
between the weighted consensus and the Euclidean matrix of the raw data.
Tournament selection (size 2), whole-arithmetic crossover (convex blends
stay on the simplex with no repair step) and Gaussian mutation with
clamp-and-renormalize drive a fixed number of generations; elites are
copied unchanged, so the best fitness per generation never decreases.

Because the consensus is linear in the weights, correlation against a fixed
matrix reduces to a quadratic form over per-member cross products. evolve()
precomputes those once and scores each chromosome in O(L^2) instead of
O(L * pairs); ``fitness`` keeps the direct route and the two are compared
in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensemble import EnsembleConfig, generate_ensemble_from_matrix
from .errors import ConfigError, DataError
from .fusion import SortedEnsemble, sort_ensemble, weighted_consensus
from .hierarchy import (
    Dendrogram,
    DissimilarityMatrix,
    cophenetic_matrix,
    cpcc,
    euclidean_dissimilarity,
    validate_data_matrix,
)
from .linkage import single_linkage

SIMPLEX_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Chromosome:
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or w.shape[0] < 1:
            raise ConfigError("chromosome needs a 1-D weight vector")
        if (w < 0.0).any():
            raise ConfigError("chromosome weights must be nonnegative")
        if abs(w.sum() - 1.0) > SIMPLEX_TOL:
            raise ConfigError(f"chromosome weights must sum to 1, got {w.sum()!r}")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class GAConfig:
    population_size: int = 100
    generations: int = 100
    crossover_rate: float = 0.8
    mutation_rate: float = 0.1
    mutation_sigma: float = 0.05
    elitism: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 2:
            raise ConfigError(f"population_size must be >= 2, got {self.population_size}")
        if self.generations < 1:
            raise ConfigError(f"generations must be >= 1, got {self.generations}")
        for name in ("crossover_rate", "mutation_rate"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ConfigError(f"{name} must be in [0, 1], got {v}")
        if self.mutation_sigma < 0.0:
            raise ConfigError(f"mutation_sigma must be >= 0, got {self.mutation_sigma}")
        if not (0 <= self.elitism < self.population_size):
            raise ConfigError(
                f"elitism must be in [0, population_size), got {self.elitism}"
            )
        if self.seed < 0:
            raise ConfigError(f"seed must be nonnegative, got {self.seed}")


@dataclass(frozen=True, eq=False)
class GAResult:
    best_chromosome: Chromosome
    best_fitness: float
    consensus_matrix: DissimilarityMatrix
    fitness_trace: np.ndarray
    seed: int


def init_population(cfg: GAConfig, length: int, rng: np.random.Generator) -> list[Chromosome]:
    """Uniform(0,1) genes scaled to unit sum."""
    if length < 1:
        raise ConfigError(f"chromosome length must be >= 1, got {length}")
    population = []
    for _ in range(cfg.population_size):
        genes = rng.random(length)
        while genes.sum() < 1e-300:
            genes = rng.random(length)
        population.append(Chromosome(genes / genes.sum()))
    return population


def fitness(c: Chromosome, sorted_ensemble: SortedEnsemble, e: DissimilarityMatrix) -> float:
    """Correlation of the chromosome's weighted consensus with e."""
    return cpcc(weighted_consensus(sorted_ensemble, c.weights), e)


class _ConsensusFitness:
    """O(L^2) fitness via precomputed centered cross products.

    With centered rows S of the sorted stack and centered Euclidean entries
    v: corr(w) = |w . (S v)| / sqrt((w . S S^T w) * (v . v)). Equals the
    direct consensus-then-correlation route up to rounding.
    """

    def __init__(self, stack: np.ndarray, e_values: np.ndarray):
        centered = stack - stack.mean(axis=1, keepdims=True)
        ev = e_values - e_values.mean()
        self.cross = centered @ ev
        self.gram = centered @ centered.T
        self.e_ss = float(ev @ ev)

    def value(self, weights: np.ndarray) -> float:
        var = float(weights @ self.gram @ weights)
        if var <= 0.0 or self.e_ss <= 0.0:
            return 0.0
        r = abs(float(weights @ self.cross)) / math.sqrt(var * self.e_ss)
        return min(r, 1.0)


def select(
    population: list[Chromosome], fitnesses, rng: np.random.Generator
) -> tuple[Chromosome, Chromosome]:
    """Two parents by independent size-2 tournaments (ties keep lower index)."""
    if not population:
        raise ConfigError("cannot select from an empty population")
    fits = np.asarray(fitnesses, dtype=np.float64)

    def tournament() -> Chromosome:
        i, j = rng.integers(0, len(population), size=2)
        if fits[j] > fits[i] or (fits[j] == fits[i] and j < i):
            return population[j]
        return population[i]

    return tournament(), tournament()


def crossover(
    a: Chromosome, b: Chromosome, rate: float, rng: np.random.Generator
) -> tuple[Chromosome, Chromosome]:
    """Whole-arithmetic blend with probability ``rate``, else copies."""
    if rng.random() >= rate:
        return a, b
    lam = rng.random()
    wa, wb = a.weights, b.weights
    return (
        Chromosome(lam * wa + (1.0 - lam) * wb),
        Chromosome((1.0 - lam) * wa + lam * wb),
    )


def mutate(
    c: Chromosome, rate: float, sigma: float, rng: np.random.Generator
) -> Chromosome:
    """Gaussian perturbation of every gene, clamped to the simplex."""
    if rng.random() >= rate:
        return c
    genes = c.weights + rng.normal(0.0, sigma, size=len(c))
    genes = np.maximum(genes, 0.0)
    total = genes.sum()
    if total <= 0.0:
        return Chromosome(np.full(len(c), 1.0 / len(c)))
    return Chromosome(genes / total)


def evolve(
    sorted_ensemble: SortedEnsemble, e: DissimilarityMatrix, cfg: GAConfig
) -> GAResult:
    """Run the evolutionary loop and return the best weighting found.

    The trace holds the best fitness of each of the ``generations`` evolved
    populations; the initial random population seeds the search but is not
    traced. best_fitness is recomputed through the direct consensus route
    so it matches cpcc(consensus_matrix, e) exactly.
    """
    if sorted_ensemble.n != e.n:
        raise DataError(f"ensemble is over {sorted_ensemble.n} points, e over {e.n}")
    rng = np.random.default_rng(cfg.seed)
    evaluator = _ConsensusFitness(sorted_ensemble.stack, e.values)
    population = init_population(cfg, sorted_ensemble.size, rng)
    fits = np.array([evaluator.value(c.weights) for c in population])
    best_idx = int(np.argmax(fits))
    best_chrom, best_fit = population[best_idx], float(fits[best_idx])
    trace = np.empty(cfg.generations)
    for gen in range(cfg.generations):
        new_pop: list[Chromosome] = []
        if cfg.elitism:
            elite_order = np.argsort(-fits, kind="stable")[: cfg.elitism]
            new_pop.extend(population[int(i)] for i in elite_order)
        while len(new_pop) < cfg.population_size:
            pa, pb = select(population, fits, rng)
            ca, cb = crossover(pa, pb, cfg.crossover_rate, rng)
            ca = mutate(ca, cfg.mutation_rate, cfg.mutation_sigma, rng)
            cb = mutate(cb, cfg.mutation_rate, cfg.mutation_sigma, rng)
            new_pop.append(ca)
            if len(new_pop) < cfg.population_size:
                new_pop.append(cb)
        population = new_pop
        fits = np.array([evaluator.value(c.weights) for c in population])
        gen_idx = int(np.argmax(fits))
        trace[gen] = float(fits[gen_idx])
        if fits[gen_idx] > best_fit:
            best_chrom, best_fit = population[gen_idx], float(fits[gen_idx])
    consensus = weighted_consensus(sorted_ensemble, best_chrom.weights)
    return GAResult(
        best_chromosome=best_chrom,
        best_fitness=cpcc(consensus, e),
        consensus_matrix=consensus,
        fitness_trace=trace,
        seed=cfg.seed,
    )


@dataclass(frozen=True, eq=False)
class PipelineResult:
    ga: GAResult
    dendrogram: Dendrogram
    consensus_ultrametric: DissimilarityMatrix
    cpcc_raw: float
    cpcc_ultrametric: float


def genetic_fuse_pipeline(
    data, ecfg: EnsembleConfig, gcfg: GAConfig
) -> PipelineResult:
    """Bag, sort, evolve, then recover a dendrogram from the consensus.

    The consensus generally violates the ultrametric inequality, so it is
    projected onto its subdominant ultrametric (single linkage plus
    cophenetic heights, which also yields the dendrogram) before emission.
    """
    x = validate_data_matrix(data)
    e = euclidean_dissimilarity(x)
    members = generate_ensemble_from_matrix(e, ecfg)
    sorted_ensemble = sort_ensemble([m.completed_matrix for m in members])
    ga = evolve(sorted_ensemble, e, gcfg)
    dend = single_linkage(ga.consensus_matrix)
    ultra = cophenetic_matrix(dend)
    return PipelineResult(
        ga=ga,
        dendrogram=dend,
        consensus_ultrametric=ultra,
        cpcc_raw=ga.best_fitness,
        cpcc_ultrametric=cpcc(ultra, e),
    )
