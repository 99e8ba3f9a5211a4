import numpy as np
import pytest

from hcfuse import (
    Chromosome,
    ConfigError,
    DissimilarityMatrix,
    EnsembleConfig,
    GAConfig,
    cophenetic_matrix,
    cpcc,
    crossover,
    euclidean_dissimilarity,
    evolve,
    fitness,
    generate_ensemble,
    genetic_fuse_pipeline,
    init_population,
    mutate,
    select,
    single_linkage,
    sort_ensemble,
    subdominant_ultrametric,
    weighted_consensus,
)
from hcfuse.datasets import gaussian_blobs
from hcfuse.genetic import _ConsensusFitness

from helpers import pearson_abs


def make_instance(seed=0, n=20, members=4, fraction=0.8):
    x = gaussian_blobs(n, centers=3, features=2, seed=seed)
    e = euclidean_dissimilarity(x)
    ens = generate_ensemble(x, EnsembleConfig(ensemble_size=members, bag_fraction=fraction, seed=seed))
    return sort_ensemble([m.completed_matrix for m in ens]), e


class TestChromosome:
    def test_valid(self):
        c = Chromosome(np.array([0.25, 0.75]))
        assert len(c) == 2

    def test_rejects_negative_and_bad_sum(self):
        with pytest.raises(ConfigError):
            Chromosome(np.array([1.2, -0.2]))
        with pytest.raises(ConfigError):
            Chromosome(np.array([0.2, 0.2]))


class TestGAConfig:
    def test_defaults_match_experimental_setup(self):
        cfg = GAConfig()
        assert cfg.population_size == 100
        assert cfg.generations == 100
        assert cfg.crossover_rate == 0.8
        assert cfg.mutation_rate == 0.1

    def test_validation(self):
        with pytest.raises(ConfigError):
            GAConfig(population_size=1)
        with pytest.raises(ConfigError):
            GAConfig(crossover_rate=1.5)
        with pytest.raises(ConfigError):
            GAConfig(elitism=100, population_size=100)


class TestInitPopulation:
    def test_invariants_and_determinism(self):
        cfg = GAConfig(population_size=20)
        pop = init_population(cfg, 6, np.random.default_rng(3))
        assert len(pop) == 20
        for c in pop:
            assert (c.weights >= 0).all()
            assert abs(c.weights.sum() - 1.0) <= 1e-9
        again = init_population(cfg, 6, np.random.default_rng(3))
        for a, b in zip(pop, again):
            assert np.array_equal(a.weights, b.weights)

    def test_length_one_degenerate(self):
        pop = init_population(GAConfig(population_size=5), 1, np.random.default_rng(1))
        for c in pop:
            assert c.weights.tolist() == [1.0]


class TestFitness:
    def test_one_hot_equals_member_cpcc(self):
        s, e = make_instance(seed=1)
        for k in range(s.size):
            w = np.zeros(s.size)
            w[k] = 1.0
            assert fitness(Chromosome(w), s, e) == cpcc(s.member(k), e)

    def test_identical_members_give_constant_fitness(self):
        x = gaussian_blobs(15, seed=2)
        e = euclidean_dissimilarity(x)
        u = subdominant_ultrametric(e)
        s = sort_ensemble([u, u, u])
        expected = cpcc(u, e)
        rng = np.random.default_rng(5)
        for _ in range(10):
            w = rng.random(3)
            w /= w.sum()
            assert fitness(Chromosome(w), s, e) == pytest.approx(expected, abs=1e-12)

    def test_grid_matches_direct_formula(self):
        s, e = make_instance(seed=3, members=2)
        for w1 in np.linspace(0.0, 1.0, 21):
            c = Chromosome(np.array([w1, 1.0 - w1]))
            consensus = w1 * s.stack[0] + (1.0 - w1) * s.stack[1]
            if consensus.std() == 0:
                continue
            assert fitness(c, s, e) == pytest.approx(
                pearson_abs(consensus, e.values), abs=1e-12
            )

    def test_fast_evaluator_matches_direct_route(self):
        s, e = make_instance(seed=4, members=5)
        evaluator = _ConsensusFitness(s.stack, e.values)
        rng = np.random.default_rng(7)
        for _ in range(100):
            w = rng.random(5)
            w /= w.sum()
            assert evaluator.value(w) == pytest.approx(
                fitness(Chromosome(w), s, e), abs=1e-10
            )

    def test_scale_invariance_of_fitness(self):
        s, e = make_instance(seed=5, members=3)
        scaled = sort_ensemble([DissimilarityMatrix(m.n, 7.0 * m.values) for m in s.matrices])
        rng = np.random.default_rng(11)
        w = rng.random(3)
        w /= w.sum()
        c = Chromosome(w)
        assert fitness(c, s, e) == pytest.approx(fitness(c, scaled, e), abs=1e-12)


class TestOperators:
    def test_select_duplicated_population(self):
        c = Chromosome(np.array([0.5, 0.5]))
        pa, pb = select([c, c], [0.3, 0.3], np.random.default_rng(0))
        assert pa is c and pb is c

    def test_select_prefers_fitter(self):
        rng = np.random.default_rng(13)
        pop = [Chromosome(np.array([1.0, 0.0])), Chromosome(np.array([0.0, 1.0]))]
        fits = [0.1, 0.9]
        draws = 100_000
        hits = sum(select(pop, fits, rng)[0] is pop[1] for _ in range(draws))
        # P(best wins a size-2 tournament) = 3/4; allow 3 sigma
        p = 0.75
        sigma = (p * (1 - p) / draws) ** 0.5
        assert abs(hits / draws - p) < 3 * sigma

    def test_select_deterministic(self):
        pop = [Chromosome(np.array([1.0, 0.0])), Chromosome(np.array([0.0, 1.0]))]
        a = select(pop, [0.2, 0.4], np.random.default_rng(17))
        b = select(pop, [0.2, 0.4], np.random.default_rng(17))
        assert a[0] is b[0] and a[1] is b[1]

    def test_crossover_identical_parents(self):
        c = Chromosome(np.array([0.3, 0.7]))
        ca, cb = crossover(c, c, 1.0, np.random.default_rng(1))
        assert np.allclose(ca.weights, c.weights, atol=1e-15)
        assert np.allclose(cb.weights, c.weights, atol=1e-15)

    def test_crossover_midpoint(self):
        class HalfRng:
            def random(self):
                return 0.5

        a = Chromosome(np.array([1.0, 0.0]))
        b = Chromosome(np.array([0.0, 1.0]))
        ca, cb = crossover(a, b, 1.0, HalfRng())
        assert np.array_equal(ca.weights, [0.5, 0.5])
        assert np.array_equal(cb.weights, [0.5, 0.5])

    def test_crossover_rate_zero_copies(self):
        a = Chromosome(np.array([1.0, 0.0]))
        b = Chromosome(np.array([0.0, 1.0]))
        ca, cb = crossover(a, b, 0.0, np.random.default_rng(2))
        assert ca is a and cb is b

    def test_children_on_simplex_without_repair(self):
        rng = np.random.default_rng(19)
        for _ in range(500):
            length = int(rng.integers(2, 8))
            wa = rng.random(length)
            wb = rng.random(length)
            a = Chromosome(wa / wa.sum())
            b = Chromosome(wb / wb.sum())
            ca, cb = crossover(a, b, 1.0, rng)
            for child in (ca, cb):
                assert (child.weights >= 0).all()
                assert abs(child.weights.sum() - 1.0) <= 1e-9

    def test_mutate_rate_zero_identity(self):
        c = Chromosome(np.array([0.4, 0.6]))
        assert mutate(c, 0.0, 0.05, np.random.default_rng(3)) is c

    def test_mutate_sigma_zero_near_identity(self):
        c = Chromosome(np.array([0.4, 0.6]))
        m = mutate(c, 1.0, 0.0, np.random.default_rng(4))
        assert np.allclose(m.weights, c.weights, atol=1e-12)

    def test_mutate_keeps_simplex(self):
        rng = np.random.default_rng(23)
        for _ in range(1000):
            length = int(rng.integers(2, 8))
            w = rng.random(length)
            c = mutate(Chromosome(w / w.sum()), 1.0, 0.5, rng)
            assert (c.weights >= 0).all()
            assert abs(c.weights.sum() - 1.0) <= 1e-9


class TestEvolve:
    def test_identical_members_constant_trace(self):
        x = gaussian_blobs(12, seed=6)
        e = euclidean_dissimilarity(x)
        u = subdominant_ultrametric(e)
        s = sort_ensemble([u, u, u])
        res = evolve(s, e, GAConfig(population_size=10, generations=8, seed=9))
        assert np.allclose(res.fitness_trace, res.fitness_trace[0], atol=1e-12)
        assert res.best_fitness == pytest.approx(cpcc(u, e), abs=1e-12)

    def test_trace_nondecreasing_with_elitism(self):
        rng = np.random.default_rng(29)
        for trial in range(5):
            s, e = make_instance(seed=30 + trial, n=15, members=4)
            res = evolve(s, e, GAConfig(population_size=12, generations=15, seed=trial))
            assert (np.diff(res.fitness_trace) >= 0).all()

    def test_best_fitness_consistency(self):
        s, e = make_instance(seed=8)
        res = evolve(s, e, GAConfig(population_size=15, generations=10, seed=2))
        assert res.best_fitness == cpcc(res.consensus_matrix, e)
        recomputed = weighted_consensus(s, res.best_chromosome.weights)
        assert np.array_equal(recomputed.values, res.consensus_matrix.values)

    def test_deterministic(self):
        s, e = make_instance(seed=9)
        cfg = GAConfig(population_size=12, generations=12, seed=77)
        a = evolve(s, e, cfg)
        b = evolve(s, e, cfg)
        assert np.array_equal(a.best_chromosome.weights, b.best_chromosome.weights)
        assert a.best_fitness == b.best_fitness
        assert np.array_equal(a.fitness_trace, b.fitness_trace)

    def test_beats_weight_grid(self):
        s, e = make_instance(seed=10, n=25, members=2)
        res = evolve(s, e, GAConfig(seed=5))
        grid_best = 0.0
        for w1 in np.linspace(0.0, 1.0, 101):
            grid_best = max(grid_best, fitness(Chromosome(np.array([w1, 1.0 - w1])), s, e))
        assert res.best_fitness >= grid_best - 1e-3


class TestPipeline:
    def test_full_bag_collapses_to_base_clustering(self):
        x = gaussian_blobs(14, seed=11)
        e = euclidean_dissimilarity(x)
        res = genetic_fuse_pipeline(
            x,
            EnsembleConfig(ensemble_size=3, bag_fraction=1.0, seed=4),
            GAConfig(population_size=10, generations=5, seed=4),
        )
        base = cophenetic_matrix(single_linkage(e))
        assert np.allclose(res.ga.consensus_matrix.values, base.values, atol=1e-12)
        assert np.allclose(res.consensus_ultrametric.values, base.values, atol=1e-12)

    def test_reports_both_cpcc_values(self):
        x = gaussian_blobs(18, seed=12)
        res = genetic_fuse_pipeline(
            x,
            EnsembleConfig(ensemble_size=4, bag_fraction=0.75, seed=5),
            GAConfig(population_size=10, generations=5, seed=5),
        )
        assert 0.0 <= res.cpcc_raw <= 1.0
        assert 0.0 <= res.cpcc_ultrametric <= 1.0
        assert res.cpcc_raw == res.ga.best_fitness
