"""Hold-out experiments: hide labels, re-annotate, score against ground truth."""
from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .annotator import AnnotatorConfig, Outcome, SweepCell, threshold_sweep
from .distances import DiagramMetric
from .errors import ClassTooSmall
from .geometry import PointCloud, normalize, read_csv

TABLE_THRESHOLDS = (0.8, 0.6, 0.4, 0.2, 0.0)
TABLE_METRICS = ("bottleneck", "wasserstein")
RESULTS_HEADER = ("dataset", "metric", "q", "threshold", "max_dim", "essential_policy",
                  "pct_labeled", "pct_correct", "n_class1", "n_class2", "n_unlabeled", "wall_ms")


@dataclass(frozen=True)
class ExperimentSpec:
    dataset: str
    holdout: float
    seed: int = 0
    label_column: str = "label"
    thresholds: tuple[float, ...] = TABLE_THRESHOLDS
    metrics: tuple[str, ...] = TABLE_METRICS
    q: float = 1.0
    aggregation: str = "max"
    max_dim: int = 1
    normalization: str = "min-max"
    essential_policy: str = "cap"
    tie_policy: str = "unlabeled"
    n_jobs: int = 1
    record_timing: bool = False

    def __post_init__(self):
        if not 0 < self.holdout < 1:
            raise ValueError(f"holdout fraction must lie in (0, 1), got {self.holdout}")
        object.__setattr__(self, "thresholds", tuple(float(t) for t in self.thresholds))
        object.__setattr__(self, "metrics", tuple(self.metrics))

    @classmethod
    def from_toml(cls, path: str | Path) -> "ExperimentSpec":
        """Read a spec from a TOML file; a relative dataset path is resolved against the file."""
        path = Path(path)
        with path.open("rb") as fh:
            raw = tomllib.load(fh)
        raw = dict(raw.get("experiment", raw))
        if "dataset" in raw and not Path(raw["dataset"]).is_absolute():
            raw["dataset"] = str(path.parent / raw["dataset"])
        unknown = set(raw) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown experiment keys: {sorted(unknown)}")
        if "thresholds" in raw:
            raw["thresholds"] = tuple(math.inf if t in ("inf", "Infinity") else float(t) for t in raw["thresholds"])
        return cls(**raw)

    def diagram_metrics(self) -> list[DiagramMetric]:
        aggregation, degree = DiagramMetric.parse_aggregation(self.aggregation)
        return [DiagramMetric(kind, self.q, aggregation, degree) for kind in self.metrics]

    def annotator_config(self) -> AnnotatorConfig:
        return AnnotatorConfig(metric=self.diagram_metrics()[0], tie_policy=self.tie_policy,
                               essential_policy=self.essential_policy, max_dim=self.max_dim)


@dataclass(frozen=True)
class AnnotationReport:
    dataset: str
    metric: str
    q: float
    threshold: float
    max_dim: int
    essential_policy: str
    pct_labeled: float
    pct_correct: float | None
    n_class1: int
    n_class2: int
    n_unlabeled: int
    wall_ms: float | None = None
    # (true label, assigned) -> count, over hidden points with ground truth
    confusion: dict[str, int] = field(default_factory=dict)

    def row(self) -> list[str]:
        return [self.dataset, self.metric, repr(self.q), _fmt(self.threshold), str(self.max_dim),
                self.essential_policy, repr(self.pct_labeled), _fmt(self.pct_correct),
                str(self.n_class1), str(self.n_class2), str(self.n_unlabeled), _fmt(self.wall_ms)]

    @classmethod
    def from_row(cls, row: dict[str, str]) -> "AnnotationReport":
        return cls(row["dataset"], row["metric"], float(row["q"]), float(row["threshold"]),
                   int(row["max_dim"]), row["essential_policy"], float(row["pct_labeled"]),
                   _opt(row["pct_correct"]), int(row["n_class1"]), int(row["n_class2"]),
                   int(row["n_unlabeled"]), _opt(row["wall_ms"]))


def _fmt(v: float | None) -> str:
    if v is None:
        return ""
    return "inf" if math.isinf(v) else repr(float(v))


def _opt(text: str) -> float | None:
    return None if text == "" else float(text)


def split_holdout(cloud: PointCloud, fraction: float, seed: int) -> tuple[PointCloud, PointCloud, PointCloud]:
    """Stratified split into (X1, X2, X); X also receives every row without a label."""
    if cloud.labels is None:
        raise ValueError("dataset has no label column")
    rng = np.random.default_rng(seed)
    labels = np.array([0 if lab is None else lab for lab in cloud.labels])
    visible, hidden = {}, []
    for cls in (1, 2):
        members = np.flatnonzero(labels == cls)
        members = members[rng.permutation(len(members))]
        n_hidden = int(round(fraction * len(members)))
        keep = np.sort(members[n_hidden:])
        if len(keep) < 2:
            raise ClassTooSmall(f"class {cls} keeps {len(keep)} visible points after holdout; need 2")
        visible[cls] = keep
        hidden.extend(members[:n_hidden].tolist())
    hidden.extend(np.flatnonzero(labels == 0).tolist())
    return cloud.subset(visible[1]), cloud.subset(visible[2]), cloud.subset(sorted(hidden))


def summarize(cell: SweepCell, X: PointCloud, spec: ExperimentSpec, wall_ms: float | None) -> AnnotationReport:
    counts = cell.counts()
    truth = dict(zip(X.ids, X.labels or [None] * len(X)))
    labeled = [d for d in cell.decisions if d.outcome is not Outcome.UNLABELED]
    graded = [d for d in labeled if truth[d.point_id] is not None]
    correct = sum(1 for d in graded if int(d.outcome.value) == truth[d.point_id])
    confusion: dict[str, int] = {}
    for d in cell.decisions:
        if truth[d.point_id] is not None:
            key = f"{truth[d.point_id]}->{d.outcome.value}"
            confusion[key] = confusion.get(key, 0) + 1
    n = len(cell.decisions)
    return AnnotationReport(
        dataset=Path(spec.dataset).stem,
        metric=cell.metric.kind,
        q=cell.metric.q,
        threshold=cell.threshold,
        max_dim=spec.max_dim,
        essential_policy=spec.essential_policy,
        pct_labeled=100.0 * len(labeled) / n if n else 0.0,
        pct_correct=100.0 * correct / len(graded) if graded else None,
        n_class1=counts[Outcome.CLASS1],
        n_class2=counts[Outcome.CLASS2],
        n_unlabeled=counts[Outcome.UNLABELED],
        wall_ms=wall_ms,
        confusion=dict(sorted(confusion.items())),
    )


def run_experiment(spec: ExperimentSpec, cloud: PointCloud | None = None) -> list[AnnotationReport]:
    """One report per (metric, threshold) cell, metric-major.

    Features are normalized over the whole dataset before the split. The
    result is a function of ``spec`` alone; ``wall_ms`` is only filled in
    when ``spec.record_timing`` is set.
    """
    if cloud is None:
        cloud = read_csv(spec.dataset, spec.label_column)
    cloud = normalize(cloud, spec.normalization)
    X1, X2, X = split_holdout(cloud, spec.holdout, spec.seed)
    start = time.perf_counter()
    cells = threshold_sweep(X1, X2, X, spec.thresholds, spec.diagram_metrics(),
                            spec.annotator_config(), n_jobs=spec.n_jobs)
    elapsed = (time.perf_counter() - start) * 1000.0
    wall_ms = elapsed if spec.record_timing else None
    return [summarize(cell, X, spec, wall_ms) for cell in cells]


def results_csv(reports: Sequence[AnnotationReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RESULTS_HEADER)
    for r in reports:
        writer.writerow(r.row())
    return buf.getvalue()


def write_results(reports: Sequence[AnnotationReport], path: str | Path) -> None:
    """Write the results CSV and, next to it, a JSON file that also keeps confusion counts."""
    path = Path(path)
    path.write_text(results_csv(reports), encoding="utf-8")
    path.with_suffix(".json").write_text(reports_json(reports), encoding="utf-8")


def read_results(path: str | Path) -> list[AnnotationReport]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != RESULTS_HEADER:
            raise ValueError(f"unexpected results header {reader.fieldnames}")
        return [AnnotationReport.from_row(row) for row in reader]


def reports_json(reports: Sequence[AnnotationReport]) -> str:
    rows = []
    for r in reports:
        d = asdict(r)
        d["threshold"] = _fmt(r.threshold)
        rows.append(d)
    return json.dumps(rows, indent=1, sort_keys=True) + "\n"


def reports_from_json(text: str) -> list[AnnotationReport]:
    out = []
    for d in json.loads(text):
        d["threshold"] = float(d["threshold"])
        out.append(AnnotationReport(**d))
    return out
