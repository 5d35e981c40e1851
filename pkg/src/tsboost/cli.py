"""Command-line front end.

Subcommands: ``simulate`` (benchmark generator), ``cluster`` (boosted
clustering or the fuzzy c-means baseline), ``evaluate`` (partition quality
report) and ``smooth`` (single-series P-spline fit). Every run writes a
``manifest.json`` with the fully resolved configuration, input digests and
phase timings. All numbers are serialized in shortest round-trip decimal
form, so rereading an emitted CSV reproduces the in-memory values exactly.

Exit codes: 0 success, 1 usage or configuration error, 2 data error.
"""

import argparse
import csv
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .boost import BoostConfig, run_boost
from .core import Dataset, harden, validate_dataset
from .distance import DistanceKind
from .errors import ConfigError, DataError, FlatCriterion, ParseError
from .evaluate import classic_rand, confusion_matrix, fuzzy_rand, reference_partition
from .fcm import FcmConfig, run_fcm
from .pdclust import bc_index
from . import pspline
from .simgen import SimConfig, generate

_DISTANCES = {
    "euclidean": DistanceKind.EUCLIDEAN,
    "penrose": DistanceKind.PENROSE_SHAPE,
    "periodogram": DistanceKind.PERIODOGRAM,
}


def _fmt(x):
    return repr(float(x))


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _parse_float(token, path, line_no):
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"{path}:{line_no}: not a number: {token!r}") from None


def read_wide(path):
    """Wide CSV (header id,t1..tn) -> Dataset on an equally spaced [0,1] domain."""
    ids, rows = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}:1: empty file") from None
        n = len(header) - 1
        if n < 1 or header[0] != "id":
            raise ParseError(f"{path}:1: expected header id,t1,...,tn")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != n + 1:
                raise ParseError(f"{path}:{line_no}: expected {n + 1} fields, got {len(row)}")
            ids.append(row[0])
            rows.append([_parse_float(tok, path, line_no) for tok in row[1:]])
    if not rows:
        raise ParseError(f"{path}: no series found")
    domain = np.linspace(0.0, 1.0, n) if n > 1 else np.array([0.0])
    return validate_dataset(Dataset.from_values(domain, np.asarray(rows), ids))


def read_long(path):
    """Long CSV (header id,t,value) -> Dataset; the domain comes from the file."""
    per_series = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}:1: empty file") from None
        if [h.strip() for h in header] != ["id", "t", "value"]:
            raise ParseError(f"{path}:1: expected header id,t,value")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ParseError(f"{path}:{line_no}: expected 3 fields, got {len(row)}")
            t = _parse_float(row[1], path, line_no)
            v = _parse_float(row[2], path, line_no)
            per_series.setdefault(row[0], []).append((t, v))
    if not per_series:
        raise ParseError(f"{path}: no series found")
    ids = list(per_series)
    first = sorted(per_series[ids[0]])
    domain = np.array([t for t, _ in first])
    rows = []
    for sid in ids:
        points = sorted(per_series[sid])
        ts = np.array([t for t, _ in points])
        if ts.shape != domain.shape or not np.array_equal(ts, domain):
            raise ParseError(f"{path}: series {sid!r} does not share the common domain")
        rows.append([v for _, v in points])
    return validate_dataset(Dataset.from_values(domain, np.asarray(rows), ids))


def read_dataset(path, fmt="wide"):
    return read_long(path) if fmt == "long" else read_wide(path)


def read_labels(path):
    """Labels CSV (header id,label) -> (ids, labels)."""
    ids, labels = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}:1: empty file") from None
        if [h.strip() for h in header] != ["id", "label"]:
            raise ParseError(f"{path}:1: expected header id,label")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(f"{path}:{line_no}: expected 2 fields, got {len(row)}")
            ids.append(row[0])
            labels.append(row[1])
    return ids, np.asarray(labels)


def read_membership(path):
    """Membership CSV (header id,p1..pK) -> (ids, (N, K) matrix)."""
    ids, rows = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}:1: empty file") from None
        k = len(header) - 1
        if k < 1 or header[0] != "id":
            raise ParseError(f"{path}:1: expected header id,p1,...,pK")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != k + 1:
                raise ParseError(f"{path}:{line_no}: expected {k + 1} fields, got {len(row)}")
            ids.append(row[0])
            rows.append([_parse_float(tok, path, line_no) for tok in row[1:]])
    if not rows:
        raise ParseError(f"{path}: no rows found")
    return ids, np.asarray(rows)


def _digest(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write_manifest(out_dir, command, settings, inputs, timings):
    manifest = {"command": command, "version": __version__}
    for key, value in settings.items():
        manifest[key] = value
    for path in inputs:
        manifest[f"digest_{Path(path).name}"] = _digest(path)
    for phase, seconds in timings.items():
        manifest[f"timing_{phase}"] = round(seconds, 6)
    with open(Path(out_dir) / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- subcommands ---------------------------------------------------------------

def cmd_simulate(args):
    sizes = tuple(int(tok) for tok in args.sizes.split(","))
    config = SimConfig(
        sizes=sizes, n_points=args.n, sigma2_u=args.sigma2_u,
        ar_coef=args.ar_coef, ar_var=args.ar_var, seed=args.seed,
    )
    t0 = time.perf_counter()
    data, labels = generate(config)
    t1 = time.perf_counter()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    n = data.n_points
    _write_csv(
        out / "series.csv",
        ["id"] + [f"t{j+1}" for j in range(n)],
        ([rec.id] + [_fmt(v) for v in rec.values] for rec in data.series),
    )
    _write_csv(
        out / "labels.csv",
        ["id", "label"],
        ([rec.id, int(lab)] for rec, lab in zip(data.series, labels)),
    )
    t2 = time.perf_counter()
    _write_manifest(
        out, "simulate",
        {
            "sizes": list(sizes), "n": config.n_points, "seed": config.seed,
            "sigma2_e": config.sigma2_e, "sigma2_v": config.sigma2_v,
            "sigma2_u": config.sigma2_u, "ar_coef": config.ar_coef,
            "ar_var": config.ar_var,
        },
        [], {"generate": t1 - t0, "write": t2 - t1},
    )
    print(f"wrote {data.n_series} series to {out / 'series.csv'}")
    return 0


def _write_cluster_outputs(out, data, membership, centers, trace_rows):
    n = data.n_points
    k = membership.shape[1]
    _write_csv(
        out / "membership.csv",
        ["id"] + [f"p{j+1}" for j in range(k)],
        ([rec.id] + [_fmt(p) for p in row] for rec, row in zip(data.series, membership)),
    )
    _write_csv(
        out / "centers.csv",
        ["cluster"] + [f"t{j+1}" for j in range(n)],
        ([c + 1] + [_fmt(v) for v in center] for c, center in enumerate(centers)),
    )
    labels = harden(membership)
    _write_csv(
        out / "assignments.csv",
        ["id", "label"],
        ([rec.id, int(lab)] for rec, lab in zip(data.series, labels)),
    )
    _write_csv(out / "trace.csv", ["restart", "iteration", "beta", "bc"], trace_rows)


def cmd_cluster(args):
    t0 = time.perf_counter()
    data = read_dataset(args.input, args.format)
    t1 = time.perf_counter()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    settings = {
        "algorithm": args.algorithm, "input": str(args.input), "format": args.format,
        "k": args.k, "seed": args.seed,
    }
    if args.algorithm == "fcm":
        config = FcmConfig(
            n_clusters=args.k, fuzzifier=args.fuzzifier, seed=args.seed,
            max_sweeps=args.iters,
        )
        result = run_fcm(data, config)
        t2 = time.perf_counter()
        trace_rows = [
            [1, sweep + 1, _fmt(obj), _fmt(float("nan"))]
            for sweep, obj in enumerate(result.objective_trace)
        ]
        _write_cluster_outputs(out, data, result.membership, result.centers, trace_rows)
        bc_final = bc_index(result.membership)
        settings.update({"fuzzifier": args.fuzzifier, "max_sweeps": args.iters,
                         "bc_final": bc_final})
    else:
        config = BoostConfig(
            n_clusters=args.k, maxiter=args.iters, restarts=args.restarts,
            distance=_DISTANCES[args.distance], seed=args.seed,
            criterion=args.lambda_criterion,
        )
        result = run_boost(data, config)
        t2 = time.perf_counter()
        trace_rows = [
            [restart + 1, it + 1, _fmt(beta), _fmt(bc)]
            for restart, trace in enumerate(result.traces)
            for it, (beta, bc) in enumerate(zip(trace.beta, trace.bc))
        ]
        _write_cluster_outputs(out, data, result.membership, result.centers, trace_rows)
        bc_final = result.bc_final
        settings.update({
            "distance": args.distance, "iters": args.iters,
            "restarts": args.restarts, "lambda_criterion": args.lambda_criterion,
            "best_restart": result.restart_index + 1, "bc_final": bc_final,
        })
    t3 = time.perf_counter()
    _write_manifest(out, "cluster", settings, [args.input],
                    {"read": t1 - t0, "run": t2 - t1, "write": t3 - t2})
    print(f"bc_final = {bc_final:.6f}; outputs in {out}")
    return 0


def cmd_evaluate(args):
    ids, membership = read_membership(args.membership)
    report = {"bc": bc_index(membership)}
    predicted = harden(membership)
    if args.reference_membership:
        _, reference = read_membership(args.reference_membership)
        report["fuzzy_rand"] = fuzzy_rand(membership, reference)
        report["classic_rand"] = classic_rand(predicted, harden(reference))
        truth = harden(reference)
    elif args.reference_labels:
        if not args.input:
            raise ConfigError("--reference-labels requires --input")
        data = read_dataset(args.input, args.format)
        label_ids, raw_labels = read_labels(args.reference_labels)
        if label_ids != data.ids:
            raise ConfigError("labels file ids do not match the input series ids")
        reference, _ = reference_partition(
            data, raw_labels, _DISTANCES[args.distance],
            criterion=args.lambda_criterion,
        )
        report["fuzzy_rand"] = fuzzy_rand(membership, reference)
        report["reference_bc"] = bc_index(reference)
        truth = raw_labels
        report["classic_rand"] = classic_rand(predicted, truth)
    else:
        raise ConfigError("provide --reference-membership or --reference-labels")
    table, t_labels, p_labels = confusion_matrix(truth, predicted)
    for key in ("fuzzy_rand", "classic_rand", "bc", "reference_bc"):
        if key in report:
            print(f"{key} = {report[key]:.6f}")
    print("confusion matrix (rows = reference, columns = predicted):")
    print("  " + " ".join(f"{str(p):>6}" for p in p_labels))
    for t_label, row in zip(t_labels, table):
        print(f"{str(t_label):>2} " + " ".join(f"{c:>6}" for c in row))
    if args.out:
        report["confusion_matrix"] = table.tolist()
        report["confusion_truth_labels"] = [str(t) for t in t_labels]
        report["confusion_predicted_labels"] = [str(p) for p in p_labels]
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def cmd_smooth(args):
    data = read_dataset(args.input, args.format)
    if args.series_id is None:
        record = data.series[0]
    else:
        matches = [rec for rec in data.series if rec.id == args.series_id]
        if not matches:
            raise ConfigError(f"series id {args.series_id!r} not found in {args.input}")
        record = matches[0]
    basis = pspline.build_basis(data.domain, degree=args.degree)
    penalty = pspline.difference_penalty(basis.n_bases, args.penalty_order)
    try:
        fit, selection = pspline.smooth_series(record.values, basis, penalty, args.criterion)
    except FlatCriterion:
        # degenerate profile (e.g. constant series): fall back to max smoothing
        grid = pspline.default_lambda_grid()
        fit = pspline.fit_pspline(record.values, basis, penalty, grid[-1])
        selection = pspline.LambdaSelection(
            lam=float(grid[-1]), criterion=args.criterion,
            lambdas=np.empty(0), scores=np.empty(0),
        )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(
        out / "fit.csv", ["t", "y", "fitted"],
        ([_fmt(t), _fmt(y), _fmt(f)] for t, y, f in
         zip(data.domain, record.values, fit.fitted)),
    )
    _write_csv(
        out / "profile.csv", ["lambda", "score"],
        ([_fmt(lam), _fmt(score)] for lam, score in
         zip(selection.lambdas, selection.scores)),
    )
    _write_manifest(out, "smooth", {
        "input": str(args.input), "series_id": record.id,
        "criterion": selection.criterion, "degree": args.degree,
        "penalty_order": args.penalty_order, "lambda": selection.lam,
    }, [args.input], {})
    print(f"series {record.id}: selected lambda = {selection.lam:.6g} ({selection.criterion})")
    return 0


# -- argument parsing ----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser():
    parser = _Parser(prog="tsboost", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="generate the simulated benchmark")
    sim.add_argument("--out", required=True, help="output directory")
    sim.add_argument("--sizes", default="90,50,100,25,60,35",
                     help="comma-separated cluster sizes (6 values)")
    sim.add_argument("--n", type=int, default=10, help="time points per series")
    sim.add_argument("--sigma2-u", type=float, default=0.3, dest="sigma2_u")
    sim.add_argument("--ar-coef", type=float, default=0.5, dest="ar_coef")
    sim.add_argument("--ar-var", type=float, default=0.005, dest="ar_var")
    sim.add_argument("--seed", type=int, default=0)
    sim.set_defaults(func=cmd_simulate)

    clu = sub.add_parser("cluster", help="cluster a dataset")
    clu.add_argument("--input", required=True)
    clu.add_argument("--format", choices=("wide", "long"), default="wide")
    clu.add_argument("--out", required=True)
    clu.add_argument("--k", type=int, required=True)
    clu.add_argument("--algorithm", choices=("boost", "fcm"), default="boost")
    clu.add_argument("--distance", choices=tuple(_DISTANCES), default="euclidean")
    clu.add_argument("--iters", type=int, default=100,
                     help="boosting iterations (boost) or max sweeps (fcm)")
    clu.add_argument("--restarts", type=int, default=10)
    clu.add_argument("--seed", type=int, default=0)
    clu.add_argument("--lambda-criterion", choices=pspline.CRITERIA,
                     default="vcurve", dest="lambda_criterion")
    clu.add_argument("--fuzzifier", type=float, default=2.0, help="fcm only")
    clu.set_defaults(func=cmd_cluster)

    ev = sub.add_parser("evaluate", help="score a membership matrix")
    ev.add_argument("--membership", required=True)
    ev.add_argument("--reference-membership", dest="reference_membership")
    ev.add_argument("--reference-labels", dest="reference_labels")
    ev.add_argument("--input", help="dataset; required with --reference-labels")
    ev.add_argument("--format", choices=("wide", "long"), default="wide")
    ev.add_argument("--distance", choices=tuple(_DISTANCES), default="euclidean")
    ev.add_argument("--lambda-criterion", choices=pspline.CRITERIA,
                    default="vcurve", dest="lambda_criterion")
    ev.add_argument("--out", help="optional JSON report path")
    ev.set_defaults(func=cmd_evaluate)

    smo = sub.add_parser("smooth", help="P-spline fit of one series")
    smo.add_argument("--input", required=True)
    smo.add_argument("--format", choices=("wide", "long"), default="wide")
    smo.add_argument("--series-id", dest="series_id")
    smo.add_argument("--out", required=True)
    smo.add_argument("--criterion", choices=pspline.CRITERIA, default="vcurve")
    smo.add_argument("--degree", type=int, default=pspline.DEFAULT_DEGREE)
    smo.add_argument("--penalty-order", type=int, dest="penalty_order",
                     default=pspline.DEFAULT_PENALTY_ORDER)
    smo.set_defaults(func=cmd_smooth)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
