"""Command-line interface.

Three workflows:
  * ``fuse``      -- run one fusion method on one dataset and write the
                     consensus matrix, its ultrametric recovery, the
                     dendrogram, and (for the genetic method) the GA log.
  * ``benchmark`` -- run several methods over one or more datasets, apply
                     the winning-frequency protocol, and emit report files.
  * ``inspect``   -- summarize an artifact produced by this tool.

Exit codes: 0 success, 1 usage or configuration error, 2 runtime or data
error. The default output directory comes from HCFUSE_OUT_DIR when set.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import io as hio
from .datasets import load_dataset, load_registry
from .ensemble import EnsembleConfig, generate_ensemble_from_matrix
from .errors import ConfigError, DataError, HcfuseError
from .evaluation import METHODS, run_trials, summarize, validate_method
from .fusion import NAMED_FUSERS, renyi_fuse
from .genetic import GAConfig, genetic_fuse_pipeline
from .hierarchy import cophenetic_matrix, cpcc, euclidean_dissimilarity, is_ultrametric
from .linkage import single_linkage


class UsageError(ConfigError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _default_out() -> str:
    return os.environ.get("HCFUSE_OUT_DIR", "hcfuse_out")


def _add_data_args(p, multiple=False):
    p.add_argument("--data", action="append" if multiple else None, required=False,
                   help="dataset CSV path" + (" (repeatable)" if multiple else ""))
    p.add_argument("--label-policy", default="none",
                   help="none | drop-first | drop-last | drop-named:<column>")
    p.add_argument("--scale", action="store_true", help="min-max scale features to [0,1]")


def _add_pipeline_args(p):
    p.add_argument("--ensemble-size", type=int, default=10)
    p.add_argument("--bag-fraction", type=float, default=0.8)
    p.add_argument("--population", type=int, default=100)
    p.add_argument("--generations", type=int, default=100)
    p.add_argument("--crossover-rate", type=float, default=0.8)
    p.add_argument("--mutation-rate", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output directory (default $HCFUSE_OUT_DIR)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hcfuse", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    fuse = sub.add_parser("fuse", help="fuse one dataset with one method")
    _add_data_args(fuse)
    fuse.add_argument("--method", default="genetic", help="|".join(METHODS))
    fuse.add_argument("--repeats", type=int, default=1, help="seeds seed..seed+repeats-1")
    _add_pipeline_args(fuse)

    bench = sub.add_parser("benchmark", help="compare methods across datasets")
    _add_data_args(bench, multiple=True)
    bench.add_argument("--registry", help="JSON registry of datasets")
    bench.add_argument("--methods", default=",".join(METHODS),
                       help="comma-separated method list (needs >= 2)")
    bench.add_argument("--repeats", type=int, default=10)
    bench.add_argument("--significance", type=float, default=0.01)
    bench.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    _add_pipeline_args(bench)

    insp = sub.add_parser("inspect", help="summarize an artifact file")
    insp.add_argument("artifact", help="matrix CSV or dendrogram text file")
    insp.add_argument("--reference", help="matrix CSV to correlate against")
    return parser


def _configs(args) -> tuple[EnsembleConfig, GAConfig]:
    ecfg = EnsembleConfig(
        ensemble_size=args.ensemble_size,
        bag_fraction=args.bag_fraction,
        seed=args.seed,
    )
    gcfg = GAConfig(
        population_size=args.population,
        generations=args.generations,
        crossover_rate=args.crossover_rate,
        mutation_rate=args.mutation_rate,
        seed=args.seed,
    )
    return ecfg, gcfg


def _artifact_meta(args, ecfg, gcfg, seed) -> dict:
    return {
        "tool": "hcfuse",
        "seed": seed,
        "ensemble": dataclasses.asdict(dataclasses.replace(ecfg, seed=seed)),
        "ga": dataclasses.asdict(dataclasses.replace(gcfg, seed=seed)),
        "label_policy": args.label_policy,
        "scale": bool(args.scale),
    }


def cmd_fuse(args) -> int:
    if not args.data:
        raise UsageError("fuse needs --data")
    method = validate_method(args.method)
    ecfg, gcfg = _configs(args)
    if args.repeats < 1:
        raise UsageError(f"--repeats must be >= 1, got {args.repeats}")
    data = load_dataset(args.data, args.label_policy, args.scale)
    out_dir = args.out or _default_out()
    os.makedirs(out_dir, exist_ok=True)
    stem = os.path.splitext(os.path.basename(args.data))[0]
    for seed in range(args.seed, args.seed + args.repeats):
        meta = _artifact_meta(args, ecfg, gcfg, seed)
        prefix = os.path.join(out_dir, f"{stem}_{method}_seed{seed}")
        if method == "genetic":
            result = genetic_fuse_pipeline(
                data,
                dataclasses.replace(ecfg, seed=seed),
                dataclasses.replace(gcfg, seed=seed),
            )
            consensus, ultra, dend = result.ga.consensus_matrix, result.consensus_ultrametric, result.dendrogram
            raw, recovered = result.cpcc_raw, result.cpcc_ultrametric
            hio.write_ga_result(result.ga, dataclasses.replace(gcfg, seed=seed), prefix + "_ga.json")
        else:
            e = euclidean_dissimilarity(data)
            members = generate_ensemble_from_matrix(e, dataclasses.replace(ecfg, seed=seed))
            consensus = renyi_fuse([m.completed_matrix for m in members], NAMED_FUSERS[method])
            dend = single_linkage(consensus)
            ultra = cophenetic_matrix(dend)
            raw, recovered = cpcc(consensus, e), cpcc(ultra, e)
        hio.write_matrix_csv(consensus, prefix + "_consensus.csv", "condensed", meta)
        hio.write_matrix_csv(ultra, prefix + "_ultrametric.csv", "condensed", meta)
        hio.write_dendrogram_text(dend, prefix + "_dendrogram.txt", meta)
        print(f"{stem} method={method} seed={seed} cpcc_raw={raw:.6f} cpcc_ultrametric={recovered:.6f}")
    return 0


def _trial_task(payload):
    data, name, method, repeats, seed, ecfg, gcfg = payload
    records = run_trials(
        data, method, repeats, seed, dataset=name, ecfg=ecfg, gcfg=gcfg
    )
    return (name, method), records


def cmd_benchmark(args) -> int:
    methods = [validate_method(m.strip()) for m in args.methods.split(",") if m.strip()]
    if len(methods) < 2:
        raise UsageError("benchmark compares methods; give at least 2 via --methods")
    if args.repeats < 1:
        raise UsageError(f"--repeats must be >= 1, got {args.repeats}")
    if args.jobs < 1:
        raise UsageError(f"--jobs must be >= 1, got {args.jobs}")
    sources = []
    if args.registry:
        for entry in load_registry(args.registry):
            sources.append((entry.name, entry.path, entry.label_policy, entry.scale))
    for path in args.data or []:
        sources.append((os.path.splitext(os.path.basename(path))[0], path,
                        args.label_policy, args.scale))
    if not sources:
        raise UsageError("benchmark needs datasets via --data or --registry")
    ecfg, gcfg = _configs(args)
    out_dir = args.out or _default_out()
    os.makedirs(out_dir, exist_ok=True)
    meta = {
        "tool": "hcfuse",
        "seed": args.seed,
        "repeats": args.repeats,
        "methods": methods,
        "datasets": [name for name, *_ in sources],
        "ensemble": dataclasses.asdict(ecfg),
        "ga": dataclasses.asdict(gcfg),
    }
    collected = {}
    failed = None
    tasks = []
    for name, path, policy, scale in sources:
        try:
            data = load_dataset(path, policy, scale)
        except HcfuseError as exc:
            failed = (name, str(exc))
            break
        for method in methods:
            tasks.append((data, name, method, args.repeats, args.seed, ecfg, gcfg))
    if failed is None:
        try:
            if args.jobs == 1:
                results = map(_trial_task, tasks)
                for key, records in results:
                    collected[key] = records
            else:
                with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                    for key, records in pool.map(_trial_task, tasks):
                        collected[key] = records
        except HcfuseError as exc:
            failed = ("trials", str(exc))
    ordered = []
    for name, *_ in sources:
        for method in methods:
            ordered.extend(collected.get((name, method), []))
    if failed is not None:
        partial = os.path.join(out_dir, "partial_trials.json")
        with open(partial, "w") as fh:
            json.dump(
                {
                    "error": {"dataset": failed[0], "message": failed[1]},
                    "records": [dataclasses.asdict(r) for r in ordered],
                },
                fh,
                indent=2,
                sort_keys=True,
            )
            fh.write("\n")
        print(f"benchmark failed on {failed[0]}: {failed[1]}", file=sys.stderr)
        print(f"partial results: {partial}", file=sys.stderr)
        return 2
    report = summarize(ordered, args.significance)
    paths = hio.emit_report(report, out_dir, meta)
    for m in report.methods:
        print(f"{m}: winning_frequency={report.winning_frequency[m]:.1f}%")
    print(f"report: {paths['means']}")
    return 0


def cmd_inspect(args) -> int:
    path = args.artifact
    if not os.path.exists(path):
        raise DataError(f"no such artifact: {path}")
    kind = None
    dend = matrix = None
    try:
        dend = hio.read_dendrogram_text(path)
        kind = "dendrogram"
    except (HcfuseError, ValueError):
        try:
            matrix = hio.read_matrix_csv(path)
            kind = "matrix"
        except (HcfuseError, ValueError):
            raise DataError(f"{path}: not a dendrogram or matrix artifact") from None
    meta = hio.read_metadata(path)
    if meta:
        print(f"metadata: {json.dumps(meta, sort_keys=True)}")
    if kind == "dendrogram":
        h = dend.heights
        print(f"dendrogram: {dend.n} leaves, {dend.merges.shape[0]} merges")
        print(f"height range: [{h.min():g}, {h.max():g}]")
        matrix = cophenetic_matrix(dend)
    else:
        print(f"matrix: {matrix.n} points, {matrix.values.size} condensed entries")
        verdict = is_ultrametric(matrix, 1e-9)
        print(f"ultrametric: {str(verdict).lower()} (tol 1e-09)")
    if args.reference:
        ref = hio.read_matrix_csv(args.reference)
        print(f"cpcc vs {args.reference}: {cpcc(matrix, ref):.6f}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "fuse":
            return cmd_fuse(args)
        if args.command == "benchmark":
            return cmd_benchmark(args)
        return cmd_inspect(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except HcfuseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
