"""Point clouds, feature normalization and Euclidean distance matrices."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Literal, Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyInput, IngestError

NormalizeMode = Literal["min-max", "z-score", "none"]
NORMALIZE_MODES = ("min-max", "z-score", "none")


@dataclass(frozen=True, eq=False)
class PointCloud:
    """An immutable finite set of points in R^dim.

    ``labels`` is optional ground truth, one entry per point: 1, 2 or None.
    """

    points: np.ndarray
    ids: tuple[int, ...] = ()
    labels: tuple[int | None, ...] | None = None
    feature_names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts.reshape(1, -1) if pts.size else pts.reshape(0, 0)
        if pts.ndim != 2:
            raise DimensionMismatch(f"points must be a 2-d array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

        ids = tuple(int(i) for i in self.ids) if self.ids else tuple(range(len(pts)))
        if len(ids) != len(pts):
            raise ValueError(f"{len(ids)} ids for {len(pts)} points")
        if len(set(ids)) != len(ids):
            raise ValueError("point ids must be unique")
        object.__setattr__(self, "ids", ids)

        if self.labels is not None:
            labels = tuple(None if lab is None else int(lab) for lab in self.labels)
            if len(labels) != len(pts):
                raise ValueError(f"{len(labels)} labels for {len(pts)} points")
            object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def subset(self, index: Sequence[int] | np.ndarray) -> "PointCloud":
        """Rows at positions ``index``, keeping their ids and labels."""
        index = [int(i) for i in index]
        labels = None if self.labels is None else tuple(self.labels[i] for i in index)
        return PointCloud(
            self.points[index] if index else np.empty((0, self.dim)),
            ids=tuple(self.ids[i] for i in index),
            labels=labels,
            feature_names=self.feature_names,
        )

    def with_point(self, x: np.ndarray, point_id: int | None = None) -> "PointCloud":
        """Return a new cloud with ``x`` appended as the last point."""
        x = np.asarray(x, dtype=np.float64).reshape(-1)
        if x.shape[0] != self.dim:
            raise DimensionMismatch(f"point has dimension {x.shape[0]}, cloud has {self.dim}")
        if point_id is None:
            point_id = max(self.ids, default=-1) + 1
        labels = None if self.labels is None else self.labels + (None,)
        return PointCloud(
            np.vstack([self.points, x[None, :]]),
            ids=self.ids + (point_id,),
            labels=labels,
            feature_names=self.feature_names,
        )


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric, zero-diagonal matrix of pairwise distances."""

    entries: np.ndarray

    def __post_init__(self):
        d = np.array(self.entries, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError(f"distance matrix must be square, got shape {d.shape}")
        if not np.all(np.isfinite(d)) or np.any(d < 0):
            raise ValueError("distances must be finite and non-negative")
        if not np.array_equal(d, d.T) or np.any(np.diag(d) != 0):
            raise ValueError("distance matrix must be symmetric with zero diagonal")
        d.setflags(write=False)
        object.__setattr__(self, "entries", d)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def enclosing_radius(self) -> float:
        """min_i max_j d(i, j); 0 for fewer than two points."""
        if self.n < 2:
            return 0.0
        return float(self.entries.max(axis=1).min())


def pairwise_distances(cloud: PointCloud) -> DistanceMatrix:
    if len(cloud) == 0:
        raise EmptyInput("cannot compute distances of an empty cloud")
    pts = cloud.points
    diff = pts[:, None, :] - pts[None, :, :]
    d = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    # symmetric by construction up to rounding in the subtraction order
    d = np.triu(d, 1)
    d = d + d.T
    return DistanceMatrix(d)


def _feature_stats(points: np.ndarray, mode: str) -> tuple[np.ndarray, np.ndarray]:
    if mode == "min-max":
        lo = points.min(axis=0)
        span = points.max(axis=0) - lo
        return lo, span
    if mode == "z-score":
        return points.mean(axis=0), points.std(axis=0)
    raise ValueError(f"unknown normalization mode {mode!r}; expected one of {NORMALIZE_MODES}")


def _apply(points: np.ndarray, shift: np.ndarray, scale: np.ndarray) -> np.ndarray:
    out = np.zeros_like(points)
    live = scale > 0
    out[:, live] = (points[:, live] - shift[live]) / scale[live]
    # constant features map to 0
    return out


def normalize(cloud: PointCloud, mode: NormalizeMode = "min-max") -> PointCloud:
    """Rescale every feature of ``cloud`` using statistics over the whole cloud."""
    if len(cloud) == 0:
        raise EmptyInput("cannot normalize an empty cloud")
    if mode == "none":
        return cloud
    shift, scale = _feature_stats(cloud.points, mode)
    return PointCloud(_apply(cloud.points, shift, scale), ids=cloud.ids,
                      labels=cloud.labels, feature_names=cloud.feature_names)


def normalize_together(clouds: Iterable[PointCloud], mode: NormalizeMode = "min-max") -> list[PointCloud]:
    """Normalize several clouds with statistics computed over their union.

    Used for X1, X2 and X so that distances on the three sets stay comparable.
    """
    clouds = list(clouds)
    nonempty = [c.points for c in clouds if len(c)]
    if not nonempty:
        raise EmptyInput("cannot normalize empty clouds")
    if mode == "none":
        return clouds
    shift, scale = _feature_stats(np.vstack(nonempty), mode)
    return [
        PointCloud(_apply(c.points, shift, scale) if len(c) else c.points, ids=c.ids,
                   labels=c.labels, feature_names=c.feature_names)
        for c in clouds
    ]


def _parse_label(raw: str, row: int, column: str) -> int | None:
    raw = raw.strip()
    if raw == "":
        return None
    try:
        value = float(raw)
    except ValueError:
        raise IngestError(f"label {raw!r} is not 1, 2 or empty", row=row, column=column) from None
    if value not in (1.0, 2.0):
        raise IngestError(f"label {raw!r} is not 1, 2 or empty", row=row, column=column)
    return int(value)


def read_csv(path: str | Path, label_column: str = "label") -> PointCloud:
    """Load a point cloud from CSV.

    A header row is required. Every column is a float feature except an
    optional final column named ``label_column`` holding 1, 2 or nothing.
    Row numbers in errors are 1-based file lines (the header is line 1).
    """
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except UnicodeDecodeError as exc:
        raise IngestError(f"{path}: not UTF-8 ({exc.reason})") from None
    if not rows:
        raise IngestError(f"{path}: missing header row", row=1)
    header = [h.strip() for h in rows[0]]
    has_label = bool(header) and header[-1] == label_column
    feature_names = header[:-1] if has_label else header
    if not feature_names:
        raise IngestError(f"{path}: no feature columns", row=1)

    points, labels = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise IngestError(f"{path}: expected {len(header)} fields, got {len(row)}", row=lineno)
        values = []
        for name, cell in zip(feature_names, row):
            try:
                v = float(cell)
            except ValueError:
                raise IngestError(f"{path}: cannot parse {cell!r} as float", row=lineno, column=name) from None
            if not np.isfinite(v):
                raise IngestError(f"{path}: non-finite value {cell!r}", row=lineno, column=name)
            values.append(v)
        points.append(values)
        labels.append(_parse_label(row[-1], lineno, label_column) if has_label else None)

    if not points:
        raise EmptyInput(f"{path}: no data rows")
    return PointCloud(np.array(points), labels=tuple(labels) if has_label else None,
                      feature_names=tuple(feature_names))
