"""Command line entry point: ``issc {synth,fit,extend,bench}``."""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .bench import DEFAULT_DELTAS, DEFAULT_LAMBDAS, REPORT_VERSION, format_table, run_bench
from .dataset import (LabeledDataset, SplitSpec, gen_trefoil_knots, gen_union_of_subspaces,
                      load_matrix, remap_labels, save_matrix, split)
from .errors import EmptyDataError, ISSCError, ParameterError
from .l1solver import L1Config
from .metrics import accuracy, nmi
from .pipeline import fit, load_model, save_model


def _energy(text):
    if text.lower() in ("none", "off"):
        return None
    return float(text)


def _floats(text):
    return tuple(float(v) for v in text.split(","))


def _read(args):
    ds = load_matrix(args.data, args.format)
    if getattr(args, "labels", None):
        labels = np.loadtxt(args.labels, dtype=np.int64, ndmin=1)
        ds = LabeledDataset(ds.points, remap_labels(labels))
        return ds, True
    return ds, args.format == "labeled-csv"


def _write_json(obj, path):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _scores(pred, truth):
    return {"accuracy": accuracy(pred, truth), "nmi": nmi(pred, truth)}


def cmd_synth(args):
    if args.kind == "subspaces":
        ds = gen_union_of_subspaces(args.k, args.dim, args.subdim, args.per_cluster,
                                    args.noise, args.seed)
    else:
        ds = gen_trefoil_knots(args.per_cluster, args.separation, args.noise, args.seed)
    save_matrix(args.out, ds.points, ds.labels)
    return 0


def cmd_fit(args):
    ds, has_labels = _read(args)
    if args.k > ds.count:
        raise ParameterError(f"k={args.k} exceeds the number of points ({ds.count})")
    ins, outs = ds, None
    if args.in_sample is not None and args.in_sample < ds.count:
        ins, outs = split(ds, SplitSpec(args.in_sample, args.seed))

    res = fit(ins.points, args.k, L1Config(args.lam, args.delta), pca_energy=args.pca_energy,
              embed_energy=args.embed_energy, normalize=not args.no_normalize, seed=args.seed,
              n_jobs=args.jobs)
    timings = dict(res.timings)
    report = {"report_version": REPORT_VERSION, "command": "fit", "params": res.model.params,
              "in_sample_count": ins.count, "embedding_dim": res.model.projection.d,
              "nonconverged_codes": int((~res.codes.converged).sum())}
    if has_labels:
        report["in_sample"] = _scores(res.assignment.labels, ins.labels)
    if outs is not None:
        t0 = time.perf_counter()
        ext = res.model.predict(outs.points)
        timings["extension"] = time.perf_counter() - t0
        report["out_sample_count"] = outs.count
        if has_labels:
            report["out_sample"] = _scores(ext.labels, outs.labels)
        if args.holdout:
            save_matrix(args.holdout, outs.points, outs.labels if has_labels else None)
    report["times"] = timings

    if args.model:
        save_model(res.model, args.model)
    if args.dump_graph:
        out = Path(args.dump_graph)
        out.mkdir(parents=True, exist_ok=True)
        np.savetxt(out / "C.csv", res.codes.C, delimiter=",")
        np.savetxt(out / "A.csv", res.graph.A, delimiter=",")
    _write_json(report, args.out)
    return 0


def cmd_extend(args):
    model = load_model(args.model)
    try:
        ds, has_labels = _read(args)
    except EmptyDataError:
        ds, has_labels = None, False

    report = {"report_version": REPORT_VERSION, "command": "extend"}
    if ds is None:
        pred = np.empty(0, dtype=np.int64)
        elapsed = 0.0
    else:
        t0 = time.perf_counter()
        pred = model.predict(ds.points).labels
        elapsed = time.perf_counter() - t0
        if has_labels:
            report["out_sample"] = _scores(pred, ds.labels)
    report.update(count=int(pred.size), times={"extension": elapsed},
                  points_per_second=(pred.size / elapsed) if elapsed > 0 else None)

    text = "".join(f"{int(v)}\n" for v in pred)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.report:
        _write_json(report, args.report)
    else:
        sys.stderr.write(json.dumps(report, sort_keys=True) + "\n")
    return 0


def cmd_bench(args):
    ds, has_labels = _read(args)
    if not has_labels:
        raise ParameterError("bench needs ground-truth labels")
    if args.k > ds.count:
        raise ParameterError(f"k={args.k} exceeds the number of points ({ds.count})")
    in_sample = args.in_sample if args.in_sample is not None else ds.count // 2
    report = run_bench(ds, args.k, in_sample, args.lambdas, args.deltas, seed=args.seed,
                       pca_energy=args.pca_energy, embed_energy=args.embed_energy,
                       parallel=args.parallel)
    print(format_table(report))
    if args.out:
        _write_json(report, args.out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="issc", description="Sparse subspace clustering with out-of-sample extension")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def data_args(p, default_format):
        p.add_argument("--data", required=True, help="CSV file, one point per row")
        p.add_argument("--format", choices=["csv", "labeled-csv"], default=default_format)
        p.add_argument("--labels", help="file with one integer label per line")

    def model_args(p):
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--lambda", dest="lam", type=float, default=1e-6)
        p.add_argument("--delta", type=float, default=1e-3)
        p.add_argument("--pca-energy", type=_energy, default=0.98, help="fraction, or 'none'")
        p.add_argument("--embed-energy", type=float, default=0.98)
        p.add_argument("--in-sample", type=int)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("synth", help="write a synthetic labeled CSV")
    p.add_argument("--kind", choices=["subspaces", "trefoil"], default="subspaces")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--dim", type=int, default=30)
    p.add_argument("--subdim", type=int, default=4)
    p.add_argument("--per-cluster", type=int, default=50)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--separation", type=float, default=9.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("fit", help="fit a model on in-sample data")
    data_args(p, "labeled-csv")
    model_args(p)
    p.add_argument("--model", help="where to write the model file")
    p.add_argument("--out", help="JSON report path (default stdout)")
    p.add_argument("--holdout", help="write the out-of-sample split here as labeled CSV")
    p.add_argument("--dump-graph", help="directory for C.csv and A.csv")
    p.add_argument("--no-normalize", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("extend", help="assign new points with a fitted model")
    data_args(p, "csv")
    p.add_argument("--model", required=True)
    p.add_argument("--out", help="labels file (default stdout)")
    p.add_argument("--report", help="JSON report path (default stderr)")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("bench", help="grid benchmark against k-means")
    data_args(p, "labeled-csv")
    model_args(p)
    p.add_argument("--lambdas", type=_floats, default=DEFAULT_LAMBDAS)
    p.add_argument("--deltas", type=_floats, default=DEFAULT_DELTAS)
    p.add_argument("--parallel", action="store_true")
    p.add_argument("--out", help="JSON report path")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"issc: file not found: {exc.filename}", file=sys.stderr)
        return 1
    except ParameterError as exc:
        print(f"issc: parameter error: {exc}", file=sys.stderr)
        return 2
    except (ISSCError, OSError, ValueError) as exc:
        print(f"issc: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
