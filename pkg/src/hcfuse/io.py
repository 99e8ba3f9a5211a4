"""Artifact interchange formats.

All emitted files are plain text. CSV artifacts start with '#'-prefixed
metadata lines carrying a JSON object (config echo and seed) so any output
can be reproduced from its own header; readers skip those lines. Floats are
written with repr(), which round-trips exactly.

Formats:
  * dendrogram: one merge per line, "left right height size".
  * matrix: either the full square (one CSV row per point, zero diagonal)
    or the condensed form (single CSV row of the n(n-1)/2 entries).
  * ensemble dump: manifest.json plus per-member dendrogram/matrix files.
  * GA result and trial-record logs: JSON.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict

import numpy as np

from .ensemble import BaggedHierarchy, EnsembleConfig
from .errors import DataError
from .evaluation import ExperimentReport, TrialRecord, summarize
from .genetic import GAConfig, GAResult
from .hierarchy import Dendrogram, DissimilarityMatrix, condensed_size


def _fmt(x: float) -> str:
    return repr(float(x))


def _meta_lines(metadata: dict | None) -> str:
    if not metadata:
        return ""
    return "# " + json.dumps(metadata, sort_keys=True) + "\n"


def read_metadata(path: str) -> dict:
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                try:
                    return json.loads(line[1:].strip())
                except json.JSONDecodeError:
                    continue
            break
    return {}


# -- dendrograms ------------------------------------------------------------


def write_dendrogram_text(dend: Dendrogram, path: str, metadata: dict | None = None):
    with open(path, "w") as fh:
        fh.write(_meta_lines(metadata))
        for left, right, height, size in dend.merges:
            fh.write(f"{int(left)} {int(right)} {_fmt(height)} {int(size)}\n")


def read_dendrogram_text(path: str) -> Dendrogram:
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 4:
                raise DataError(f"{path}: expected 'left right height size', got {line!r}")
            rows.append([float(p) for p in parts])
    if not rows:
        raise DataError(f"{path}: no merge rows found")
    merges = np.asarray(rows)
    return Dendrogram(len(rows) + 1, merges)


# -- matrices ---------------------------------------------------------------


def write_matrix_csv(
    m: DissimilarityMatrix, path: str, form: str = "square", metadata: dict | None = None
):
    if form not in ("square", "condensed"):
        raise DataError(f"matrix form must be 'square' or 'condensed', got {form!r}")
    with open(path, "w") as fh:
        fh.write(_meta_lines(metadata))
        if form == "condensed":
            fh.write(",".join(_fmt(v) for v in m.values) + "\n")
        else:
            for row in m.full():
                fh.write(",".join(_fmt(v) for v in row) + "\n")


def read_matrix_csv(path: str) -> DissimilarityMatrix:
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            rows.append([float(p) for p in line.split(",")])
    if not rows:
        raise DataError(f"{path}: no matrix rows found")
    if len(rows) == 1:
        values = np.asarray(rows[0])
        # solve p = n(n-1)/2 for n
        n = int(round((1 + np.sqrt(1 + 8 * values.size)) / 2))
        if condensed_size(n) != values.size:
            raise DataError(f"{path}: {values.size} values is not a condensed matrix length")
        return DissimilarityMatrix(n, values)
    square = np.asarray(rows)
    if square.shape[0] != square.shape[1]:
        raise DataError(f"{path}: matrix is {square.shape[0]}x{square.shape[1]}, expected square")
    return DissimilarityMatrix.from_square(square)


# -- ensembles --------------------------------------------------------------


def write_ensemble(
    members: list[BaggedHierarchy], cfg: EnsembleConfig, out_dir: str
) -> str:
    os.makedirs(out_dir, exist_ok=True)
    manifest = {
        "seed": cfg.seed,
        "ensemble_size": cfg.ensemble_size,
        "bag_fraction": cfg.bag_fraction,
        "members": [],
    }
    for l, member in enumerate(members):
        dname = f"member_{l:02d}.dendrogram.txt"
        mname = f"member_{l:02d}.matrix.csv"
        meta = {"member": l, "seed": cfg.seed}
        write_dendrogram_text(member.dendrogram, os.path.join(out_dir, dname), meta)
        write_matrix_csv(member.completed_matrix, os.path.join(out_dir, mname), "condensed", meta)
        manifest["members"].append(
            {
                "index": l,
                "sampled_indices": [int(i) for i in member.sampled_indices],
                "dendrogram": dname,
                "matrix": mname,
            }
        )
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


# -- GA results -------------------------------------------------------------


def write_ga_result(result: GAResult, cfg: GAConfig, path: str):
    payload = {
        "best_weights": [float(w) for w in result.best_chromosome.weights],
        "best_fitness": result.best_fitness,
        "fitness_trace": [float(f) for f in result.fitness_trace],
        "seed": result.seed,
        "config": asdict(cfg),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- experiment reports -----------------------------------------------------


def emit_report(report: ExperimentReport, out_dir: str, metadata: dict | None = None) -> dict:
    """Write the mean-CPCC table, winning frequencies, and the trial log.

    Returns the mapping of artifact kind to path. Raises on empty reports.
    """
    if not report.records:
        raise DataError("refusing to emit an empty report")
    os.makedirs(out_dir, exist_ok=True)
    meta = dict(metadata or {})
    meta.setdefault("significance", report.significance)
    paths = {
        "means": os.path.join(out_dir, "mean_cpcc.csv"),
        "frequency": os.path.join(out_dir, "winning_frequency.csv"),
        "trials": os.path.join(out_dir, "trials.json"),
    }
    with open(paths["means"], "w") as fh:
        fh.write(_meta_lines(meta))
        fh.write("method," + ",".join(report.datasets) + "\n")
        for m in report.methods:
            cells = [_fmt(report.means[(ds, m)]) for ds in report.datasets]
            fh.write(m + "," + ",".join(cells) + "\n")
    with open(paths["frequency"], "w") as fh:
        fh.write(_meta_lines(meta))
        fh.write("method,winning_frequency_percent\n")
        for m in report.methods:
            fh.write(f"{m},{_fmt(report.winning_frequency[m])}\n")
    with open(paths["trials"], "w") as fh:
        json.dump(
            {
                "metadata": meta,
                "significance": report.significance,
                "records": [asdict(r) for r in report.records],
            },
            fh,
            indent=2,
            sort_keys=True,
        )
        fh.write("\n")
    return paths


def load_trials_json(path: str) -> ExperimentReport:
    """Rebuild a report from an emitted trial log."""
    with open(path) as fh:
        payload = json.load(fh)
    records = [TrialRecord(**r) for r in payload["records"]]
    return summarize(records, payload["significance"])
