import json

import numpy as np
import pytest

from hcfuse import (
    ConfigError,
    DataError,
    DissimilarityMatrix,
    EnsembleConfig,
    GAConfig,
    TrialRecord,
    generate_ensemble,
    summarize,
)
from hcfuse.datasets import (
    concentric_rings,
    gaussian_blobs,
    load_dataset,
    load_registry,
    minmax_scale,
)
from hcfuse.genetic import GAResult, Chromosome, evolve
from hcfuse import io as hio

from helpers import random_dendrogram, random_matrix


class TestLoadDataset:
    def test_plain_csv(self, tmp_path):
        p = tmp_path / "toy.csv"
        p.write_text("0,0\n3,4\n0,8\n")
        x = load_dataset(str(p))
        assert x.shape == (3, 2)
        assert x[1].tolist() == [3.0, 4.0]

    def test_header_autodetect(self, tmp_path):
        p = tmp_path / "toy.csv"
        p.write_text("a,b\n0,0\n3,4\n0,8\n")
        assert load_dataset(str(p)).shape == (3, 2)

    def test_drop_first_and_last(self, tmp_path):
        p = tmp_path / "toy.csv"
        p.write_text("1,10,20\n2,30,40\n3,50,60\n")
        assert load_dataset(str(p), "drop-first").tolist() == [[10, 20], [30, 40], [50, 60]]
        assert load_dataset(str(p), "drop-last").tolist() == [[1, 10], [2, 30], [3, 50]]

    def test_drop_named(self, tmp_path):
        p = tmp_path / "toy.csv"
        p.write_text("cls,f1,f2\n1,10,20\n2,30,40\n3,50,60\n")
        assert load_dataset(str(p), "drop-named:cls").tolist() == [[10, 20], [30, 40], [50, 60]]
        with pytest.raises(DataError):
            load_dataset(str(p), "drop-named:missing")

    def test_missing_value_names_cell(self, tmp_path):
        p = tmp_path / "toy.csv"
        p.write_text("1,2\n3,\n5,6\n")
        with pytest.raises(DataError, match="row 2, column 2"):
            load_dataset(str(p))

    def test_too_few_rows(self, tmp_path):
        p = tmp_path / "toy.csv"
        p.write_text("1,2\n3,4\n")
        with pytest.raises(DataError):
            load_dataset(str(p))

    def test_unknown_policy(self, tmp_path):
        p = tmp_path / "toy.csv"
        p.write_text("1,2\n3,4\n5,6\n")
        with pytest.raises(ConfigError):
            load_dataset(str(p), "drop-middle")

    def test_scaling(self, tmp_path):
        p = tmp_path / "toy.csv"
        p.write_text("0,5\n5,5\n10,5\n")
        x = load_dataset(str(p), scale=True)
        assert x[:, 0].tolist() == [0.0, 0.5, 1.0]
        assert x[:, 1].tolist() == [0.0, 0.0, 0.0]  # constant feature

    def test_label_column_never_influences_results(self, tmp_path):
        rng = np.random.default_rng(3)
        base = rng.normal(size=(10, 3))
        plain = tmp_path / "plain.csv"
        labeled = tmp_path / "labeled.csv"
        plain.write_text("\n".join(",".join(repr(float(v)) for v in row) for row in base) + "\n")
        labeled.write_text(
            "\n".join("7," + ",".join(repr(float(v)) for v in row) for row in base) + "\n"
        )
        a = load_dataset(str(plain))
        b = load_dataset(str(labeled), "drop-first")
        assert np.array_equal(a, b)


class TestSynthetic:
    def test_blobs_shape_and_determinism(self):
        a = gaussian_blobs(30, centers=3, features=4, seed=9)
        b = gaussian_blobs(30, centers=3, features=4, seed=9)
        assert a.shape == (30, 4)
        assert np.array_equal(a, b)

    def test_rings_shape(self):
        x = concentric_rings(40, rings=3, seed=2)
        assert x.shape == (40, 2)
        radii = np.hypot(x[:, 0], x[:, 1])
        assert radii.max() > 2.0  # outer rings exist

    def test_minmax_scale_range(self):
        rng = np.random.default_rng(4)
        x = minmax_scale(rng.normal(size=(20, 3)))
        assert x.min() >= 0.0 and x.max() <= 1.0


class TestRegistry:
    def test_roundtrip(self, tmp_path):
        data = tmp_path / "d.csv"
        data.write_text("1,2\n3,4\n5,6\n")
        reg = tmp_path / "registry.json"
        reg.write_text(json.dumps([{"name": "toy", "path": "d.csv", "label_policy": "none"}]))
        entries = load_registry(str(reg))
        assert entries[0].name == "toy"
        assert entries[0].path == str(data)

    def test_bad_registry(self, tmp_path):
        reg = tmp_path / "registry.json"
        reg.write_text(json.dumps([{"nome": "typo"}]))
        with pytest.raises(DataError):
            load_registry(str(reg))


class TestDendrogramIO:
    def test_roundtrip(self, tmp_path):
        rng = np.random.default_rng(7)
        d = random_dendrogram(rng, 12)
        p = tmp_path / "dend.txt"
        hio.write_dendrogram_text(d, str(p), {"seed": 1})
        back = hio.read_dendrogram_text(str(p))
        assert np.array_equal(back.merges, d.merges)
        assert hio.read_metadata(str(p)) == {"seed": 1}

    def test_rejects_garbage(self, tmp_path):
        p = tmp_path / "dend.txt"
        p.write_text("0 1 2\n")
        with pytest.raises(DataError):
            hio.read_dendrogram_text(str(p))


class TestMatrixIO:
    def test_square_roundtrip(self, tmp_path):
        rng = np.random.default_rng(11)
        m = random_matrix(rng, 7)
        p = tmp_path / "m.csv"
        hio.write_matrix_csv(m, str(p), "square", {"kind": "test"})
        back = hio.read_matrix_csv(str(p))
        assert np.array_equal(back.values, m.values)

    def test_condensed_roundtrip(self, tmp_path):
        rng = np.random.default_rng(13)
        m = random_matrix(rng, 9)
        p = tmp_path / "m.csv"
        hio.write_matrix_csv(m, str(p), "condensed")
        back = hio.read_matrix_csv(str(p))
        assert np.array_equal(back.values, m.values)

    def test_bad_condensed_length(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_text("1.0,2.0,3.0,4.0\n")
        with pytest.raises(DataError):
            hio.read_matrix_csv(str(p))


class TestEnsembleDump:
    def test_manifest_and_members(self, tmp_path):
        x = gaussian_blobs(12, seed=5)
        cfg = EnsembleConfig(ensemble_size=3, bag_fraction=0.8, seed=21)
        members = generate_ensemble(x, cfg)
        manifest_path = hio.write_ensemble(members, cfg, str(tmp_path / "ens"))
        manifest = json.loads(open(manifest_path).read())
        assert manifest["seed"] == 21
        assert manifest["ensemble_size"] == 3
        assert len(manifest["members"]) == 3
        first = manifest["members"][0]
        assert first["sampled_indices"] == [int(i) for i in members[0].sampled_indices]
        m = hio.read_matrix_csv(str(tmp_path / "ens" / first["matrix"]))
        assert np.array_equal(m.values, members[0].completed_matrix.values)
        d = hio.read_dendrogram_text(str(tmp_path / "ens" / first["dendrogram"]))
        assert np.array_equal(d.merges, members[0].dendrogram.merges)


class TestGAExport:
    def test_ga_json(self, tmp_path):
        from hcfuse import euclidean_dissimilarity, sort_ensemble

        x = gaussian_blobs(12, seed=6)
        e = euclidean_dissimilarity(x)
        members = generate_ensemble(x, EnsembleConfig(ensemble_size=3, seed=2))
        cfg = GAConfig(population_size=6, generations=4, seed=2)
        result = evolve(sort_ensemble([m.completed_matrix for m in members]), e, cfg)
        p = tmp_path / "ga.json"
        hio.write_ga_result(result, cfg, str(p))
        payload = json.loads(p.read_text())
        assert payload["seed"] == 2
        assert payload["config"]["population_size"] == 6
        assert payload["best_weights"] == [float(w) for w in result.best_chromosome.weights]
        assert payload["best_fitness"] == result.best_fitness
        assert len(payload["fitness_trace"]) == 4


class TestReportEmission:
    def make_report(self):
        records = []
        for ds in ("a", "b"):
            for m in ("amean", "min", "genetic"):
                for s in range(3):
                    val = {"amean": 0.5, "min": 0.6, "genetic": 0.9}[m] + 0.001 * s
                    records.append(TrialRecord(ds, m, s, val, val - 0.01, 0.02))
        return summarize(records)

    def test_emit_shapes(self, tmp_path):
        report = self.make_report()
        paths = hio.emit_report(report, str(tmp_path), {"seed": 0})
        mean_lines = [
            l for l in open(paths["means"]).read().splitlines() if not l.startswith("#")
        ]
        assert mean_lines[0] == "method,a,b"
        assert len(mean_lines) == 1 + 3  # header + three methods
        freq_lines = [
            l for l in open(paths["frequency"]).read().splitlines() if not l.startswith("#")
        ]
        assert freq_lines[0] == "method,winning_frequency_percent"
        assert len(freq_lines) == 1 + 3

    def test_roundtrip_identical_report(self, tmp_path):
        report = self.make_report()
        paths = hio.emit_report(report, str(tmp_path))
        again = hio.load_trials_json(paths["trials"])
        assert again.records == report.records
        assert again.means == report.means
        assert again.winning_frequency == report.winning_frequency
        assert again.best_method == report.best_method

    def test_empty_rejected(self, tmp_path):
        with pytest.raises(DataError):
            summarize([])
