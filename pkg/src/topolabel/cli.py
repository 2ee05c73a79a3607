"""Command line entry point: ``topolabel <subcommand> ...``.

Exit codes: 0 ok, 1 usage error, 2 runtime error. Errors are reported on
stderr as a single ``error: <Kind>: <message>`` line.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

import numpy as np

from . import oracles
from .annotator import AnnotatorConfig, annotate_set
from .distances import DiagramMetric, bottleneck, diagram_distance, wasserstein
from .errors import TopoLabelError
from .experiment import ExperimentSpec, results_csv, run_experiment, write_results
from .filtration import build_rips
from .geometry import NORMALIZE_MODES, PointCloud, normalize, pairwise_distances, read_csv
from .persistence import PersistenceDiagram, compute_persistence, finitize

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _metric(args) -> DiagramMetric:
    try:
        aggregation, degree = DiagramMetric.parse_aggregation(args.agg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return DiagramMetric(args.metric, args.q, aggregation, degree)


def _add_metric_flags(p):
    p.add_argument("--metric", choices=("bottleneck", "wasserstein"), default="bottleneck")
    p.add_argument("--q", type=float, default=1.0, help="Wasserstein order (>= 1)")
    p.add_argument("--agg", default="max", help="max, sum or single:K (per-degree aggregation)")


def _add_topology_flags(p):
    p.add_argument("--max-dim", type=int, default=1, help="highest homology degree")
    p.add_argument("--normalize", choices=NORMALIZE_MODES, default="min-max")
    p.add_argument("--label-column", default="label")


def cmd_persistence(args) -> int:
    cloud = normalize(read_csv(args.csv, args.label_column), args.normalize)
    if args.label is not None:
        if cloud.labels is None:
            raise UsageError("--label given but the CSV has no label column")
        cloud = cloud.subset([i for i, lab in enumerate(cloud.labels) if lab == args.label])
    filt = build_rips(pairwise_distances(cloud), max_dim=args.max_dim + 1)
    diag = compute_persistence(filt)
    if args.essential != "keep":
        diag = finitize(diag, args.essential)
    _emit(diag.to_json() + "\n", args.output)
    return EXIT_OK


def cmd_distance(args) -> int:
    diags = []
    for path in (args.diag1, args.diag2):
        diag = PersistenceDiagram.from_json(Path(path).read_text(encoding="utf-8"))
        if args.essential == "drop":
            diag = finitize(diag, "drop")
        diags.append(diag)
    print(repr(diagram_distance(diags[0], diags[1], _metric(args))))
    return EXIT_OK


def cmd_annotate(args) -> int:
    cloud = read_csv(args.csv, args.label_column)
    if cloud.labels is None:
        raise UsageError(f"{args.csv} has no {args.label_column!r} column")
    cloud = normalize(cloud, args.normalize)
    labels = cloud.labels
    X1 = cloud.subset([i for i, lab in enumerate(labels) if lab == 1])
    X2 = cloud.subset([i for i, lab in enumerate(labels) if lab == 2])
    X = cloud.subset([i for i, lab in enumerate(labels) if lab is None])
    cfg = AnnotatorConfig(threshold=args.threshold, metric=_metric(args), tie_policy=args.tie,
                          essential_policy=args.essential, max_dim=args.max_dim)
    decisions = {d.point_id: d for d in annotate_set(X1, X2, X, cfg, n_jobs=args.jobs)}

    with open(args.csv, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh)]
    out = [rows[0] + ["assigned", "d1", "d2"]]
    data_rows = [r for r in rows[1:] if r and any(c.strip() for c in r)]
    for pid, row in enumerate(data_rows):
        d = decisions.get(pid)
        if d is None:
            out.append(row + [str(labels[pid]), "", ""])
        else:
            out.append(row + [d.outcome.value, _num(d.d1), _num(d.d2)])
    buf = _csv_text(out)
    _emit(buf, args.output)
    errors = [d for d in decisions.values() if d.error]
    for d in errors:
        print(f"warning: point {d.point_id}: {d.error}", file=sys.stderr)
    return EXIT_OK


def cmd_sweep(args) -> int:
    spec = ExperimentSpec.from_toml(args.config)
    if args.jobs is not None:
        spec = ExperimentSpec(**{**spec.__dict__, "n_jobs": args.jobs})
    reports = run_experiment(spec)
    if args.output:
        write_results(reports, args.output)
    else:
        sys.stdout.write(results_csv(reports))
    return EXIT_OK


def cmd_oracle(args) -> int:
    """Cross-check persistence and distances against brute force on random inputs."""
    rng = np.random.default_rng(args.seed)
    failures = 0
    for case in range(args.n):
        n_pts = int(rng.integers(3, 8))
        pts = oracles.random_cloud(rng, n_pts, int(rng.integers(2, 5)))
        diag = compute_persistence(build_rips(pairwise_distances(PointCloud(pts)), max_dim=2))
        for r in np.linspace(0, 1.2 * math.sqrt(pts.shape[1]), 20):
            want = oracles.betti_numbers(pts.tolist(), 2, r)
            got = [diag.betti(k, r) for k in range(2)]
            if want != got:
                failures += 1
                print(f"persistence case {case}: r={r!r} betti {got} != oracle {want}")
                break
        a = oracles.random_diagram(rng, int(rng.integers(0, 6)))
        b = oracles.random_diagram(rng, int(rng.integers(0, 6)))
        want_b, want_w = oracles.brute_force_distances(a, b, (1.0, 2.0))
        got = [bottleneck(a, b)[0], wasserstein(a, b, 1.0)[0], wasserstein(a, b, 2.0)[0]]
        for name, g, w in zip(("bottleneck", "W1", "W2"), got, (want_b, want_w[1.0], want_w[2.0])):
            if abs(g - w) > 1e-9:
                failures += 1
                print(f"distance case {case}: {name} {g!r} != oracle {w!r}")
    print(f"oracle: {args.n} cases, {failures} failures")
    return EXIT_OK if failures == 0 else EXIT_RUNTIME


def _num(v: float) -> str:
    return "" if math.isnan(v) else repr(v)


def _csv_text(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="topolabel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("persistence", help="emit the persistence diagram of a CSV point cloud as JSON")
    p.add_argument("csv")
    _add_topology_flags(p)
    p.add_argument("--label", type=int, choices=(1, 2), help="restrict to one class")
    p.add_argument("--essential", choices=("cap", "drop", "keep"), default="cap")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_persistence)

    p = sub.add_parser("distance", help="distance between two diagram JSON files")
    p.add_argument("diag1")
    p.add_argument("diag2")
    _add_metric_flags(p)
    p.add_argument("--essential", choices=("error", "drop"), default="error",
                   help="what to do with infinite deaths")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("annotate", help="label the rows of a CSV whose label is empty")
    p.add_argument("csv")
    p.add_argument("--threshold", type=float, default=0.8)
    _add_metric_flags(p)
    _add_topology_flags(p)
    p.add_argument("--essential", choices=("cap", "drop"), default="cap")
    p.add_argument("--tie", choices=("unlabeled", "class1"), default="unlabeled")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("sweep", help="run a hold-out experiment grid from a TOML config")
    p.add_argument("config")
    p.add_argument("--jobs", type=int)
    p.add_argument("-o", "--output", help="results CSV (a .json twin is written alongside)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", help="brute-force cross-checks on random inputs")
    p.add_argument("n", type=int)
    p.add_argument("seed", type=int)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TopoLabelError, ValueError, OSError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
