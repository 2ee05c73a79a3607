"""Label unlabeled points by the topological perturbation they cause.

For a candidate point x the persistence diagram of each labeled class is
compared with the diagram of that class plus x. The class that is disturbed
least wins, provided its distance does not exceed the threshold.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Literal, Sequence

import numpy as np

from .distances import DiagramMetric, degree_distances, aggregate
from .errors import ClassTooSmall, DimensionMismatch, TopoLabelError
from .filtration import build_rips
from .geometry import PointCloud, pairwise_distances
from .persistence import PersistenceDiagram, compute_persistence, finitize

MIN_CLASS_SIZE = 2
TIE_POLICIES = ("unlabeled", "class1")


class Outcome(str, enum.Enum):
    CLASS1 = "1"
    CLASS2 = "2"
    UNLABELED = "none"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class AnnotatorConfig:
    """Knobs of the labeling rule.

    ``max_dim`` is the highest homology degree compared; filtrations are built
    one dimension higher so that degree's classes can die.
    """

    threshold: float = 0.8
    metric: DiagramMetric = field(default_factory=DiagramMetric)
    tie_policy: Literal["unlabeled", "class1"] = "unlabeled"
    essential_policy: Literal["drop", "cap"] = "cap"
    max_dim: int = 1
    max_radius: float | Literal["auto"] = "auto"

    def __post_init__(self):
        if not self.threshold >= 0:
            raise ValueError(f"threshold must be >= 0, got {self.threshold}")
        if self.tie_policy not in TIE_POLICIES:
            raise ValueError(f"unknown tie policy {self.tie_policy!r}")
        if self.max_dim < 0:
            raise ValueError("max_dim must be >= 0")


@dataclass(frozen=True)
class LabelDecision:
    point_id: int
    outcome: Outcome
    d1: float
    d2: float
    error: str | None = None


def decide(d1: float, d2: float, threshold: float, tie_policy: str = "unlabeled") -> Outcome:
    """The thresholded arg-min rule.

    A threshold of exactly 0 switches the threshold test off, so every point
    with distinct distances gets the closer class.
    """
    if math.isnan(d1) or math.isnan(d2):
        return Outcome.UNLABELED
    if threshold != 0 and min(d1, d2) > threshold:
        return Outcome.UNLABELED
    if d1 == d2:
        return Outcome.CLASS1 if tie_policy == "class1" else Outcome.UNLABELED
    return Outcome.CLASS1 if d1 < d2 else Outcome.CLASS2


def class_diagram(cloud: PointCloud, cfg: AnnotatorConfig) -> PersistenceDiagram:
    filt = build_rips(pairwise_distances(cloud), max_dim=cfg.max_dim + 1, max_radius=cfg.max_radius)
    return finitize(compute_persistence(filt), cfg.essential_policy)


class Annotator:
    """Holds the two labeled classes and their baseline diagrams.

    The baselines are computed once; each query only builds the two
    filtrations that include the new point.
    """

    def __init__(self, X1: PointCloud, X2: PointCloud, cfg: AnnotatorConfig = AnnotatorConfig()):
        for name, cloud in (("X1", X1), ("X2", X2)):
            if len(cloud) < MIN_CLASS_SIZE:
                raise ClassTooSmall(f"{name} has {len(cloud)} points; need at least {MIN_CLASS_SIZE}")
        if X1.dim != X2.dim:
            raise DimensionMismatch(f"X1 has dimension {X1.dim}, X2 has {X2.dim}")
        self.X1, self.X2, self.cfg = X1, X2, cfg
        self.base1 = class_diagram(X1, cfg)
        self.base2 = class_diagram(X2, cfg)

    def augmented(self, x) -> tuple[PersistenceDiagram, PersistenceDiagram]:
        x = np.asarray(x, dtype=np.float64).reshape(-1)
        if x.shape[0] != self.X1.dim:
            raise DimensionMismatch(f"point has dimension {x.shape[0]}, classes have {self.X1.dim}")
        if not np.all(np.isfinite(x)):
            raise ValueError("point coordinates must be finite")
        return (class_diagram(self.X1.with_point(x), self.cfg),
                class_diagram(self.X2.with_point(x), self.cfg))

    def distances(self, x, metrics: Sequence[DiagramMetric] | None = None) -> list[tuple[float, float]]:
        """(d1, d2) for each metric, sharing the two augmented diagrams."""
        metrics = [self.cfg.metric] if metrics is None else list(metrics)
        aug1, aug2 = self.augmented(x)
        out = []
        for metric in metrics:
            d1 = aggregate(degree_distances(self.base1, aug1, metric), metric)
            d2 = aggregate(degree_distances(self.base2, aug2, metric), metric)
            out.append((d1, d2))
        return out

    def classify(self, x, point_id: int = 0) -> LabelDecision:
        (d1, d2), = self.distances(x)
        return LabelDecision(point_id, decide(d1, d2, self.cfg.threshold, self.cfg.tie_policy), d1, d2)


def classify_point(X1: PointCloud, X2: PointCloud, x, cfg: AnnotatorConfig = AnnotatorConfig(),
                   point_id: int = 0) -> LabelDecision:
    return Annotator(X1, X2, cfg).classify(x, point_id)


def _safe_distances(annotator: Annotator, metrics, x) -> list[tuple[float, float]] | str:
    try:
        return annotator.distances(x, metrics)
    except (TopoLabelError, ValueError) as exc:
        return f"{type(exc).__name__}: {exc}"


def point_distances(annotator: Annotator, X: PointCloud, metrics: Sequence[DiagramMetric],
                    n_jobs: int = 1) -> list[list[tuple[float, float]] | str]:
    """Per-point (d1, d2) for every metric, in the order of X.

    A point that fails yields its error message instead of distances.
    """
    work = partial(_safe_distances, annotator, list(metrics))
    rows = list(X.points)
    if n_jobs == 1 or len(rows) < 2:
        return [work(x) for x in rows]
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(work, rows, chunksize=max(1, len(rows) // (4 * n_jobs))))


def _decisions(X: PointCloud, results, metric_index: int, threshold: float,
               tie_policy: str) -> list[LabelDecision]:
    out = []
    for pid, res in zip(X.ids, results):
        if isinstance(res, str):
            out.append(LabelDecision(pid, Outcome.UNLABELED, math.nan, math.nan, error=res))
            continue
        d1, d2 = res[metric_index]
        out.append(LabelDecision(pid, decide(d1, d2, threshold, tie_policy), d1, d2))
    return out


def annotate_set(X1: PointCloud, X2: PointCloud, X: PointCloud,
                 cfg: AnnotatorConfig = AnnotatorConfig(), n_jobs: int = 1) -> list[LabelDecision]:
    """One decision per point of X, each made against the original X1 and X2."""
    if len(X) == 0:
        return []
    annotator = Annotator(X1, X2, cfg)
    results = point_distances(annotator, X, [cfg.metric], n_jobs)
    return _decisions(X, results, 0, cfg.threshold, cfg.tie_policy)


@dataclass(frozen=True)
class SweepCell:
    metric: DiagramMetric
    threshold: float
    decisions: tuple[LabelDecision, ...]

    def counts(self) -> dict[Outcome, int]:
        out = {o: 0 for o in Outcome}
        for d in self.decisions:
            out[d.outcome] += 1
        return out


def threshold_sweep(X1: PointCloud, X2: PointCloud, X: PointCloud, thresholds: Sequence[float],
                    metrics: Sequence[DiagramMetric], cfg: AnnotatorConfig = AnnotatorConfig(),
                    n_jobs: int = 1) -> list[SweepCell]:
    """Decisions for every (metric, threshold) pair, metric-major.

    Distances do not depend on the threshold, so each point's diagrams and
    distances are computed once for the whole grid.
    """
    metrics = list(metrics)
    annotator = Annotator(X1, X2, cfg)
    results = point_distances(annotator, X, metrics, n_jobs) if len(X) else []
    cells = []
    for mi, metric in enumerate(metrics):
        for t in thresholds:
            if not t >= 0:
                raise ValueError(f"threshold must be >= 0, got {t}")
            cells.append(SweepCell(metric, float(t),
                                   tuple(_decisions(X, results, mi, float(t), cfg.tie_policy))))
    return cells
