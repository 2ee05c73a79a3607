"""Bottleneck and q-Wasserstein distances between persistence diagrams.

Both distances are computed exactly on the diagonal-augmented bipartite
problem: each diagram gets one diagonal slot per point of the other diagram,
pair costs are L-infinity distances in the plane, a point matched to its own
diagonal slot costs half its persistence, and two diagonal slots match for free.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Union

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import InfiniteCoordinate, InvalidOrder
from .matching import hopcroft_karp
from .persistence import PersistenceDiagram

DiagramLike = Union[PersistenceDiagram, np.ndarray]
AGGREGATIONS = ("max", "sum", "single")
METRIC_KINDS = ("bottleneck", "wasserstein")


@dataclass(frozen=True)
class DiagramMetric:
    kind: Literal["bottleneck", "wasserstein"] = "bottleneck"
    q: float = 1.0
    aggregation: Literal["max", "sum", "single"] = "max"
    degree: int = 0  # only read when aggregation == "single"

    def __post_init__(self):
        if self.kind not in METRIC_KINDS:
            raise ValueError(f"unknown metric {self.kind!r}; expected one of {METRIC_KINDS}")
        if not self.q >= 1:
            raise InvalidOrder(f"Wasserstein order must be >= 1, got {self.q}")
        if self.aggregation not in AGGREGATIONS:
            raise ValueError(f"unknown aggregation {self.aggregation!r}; expected one of {AGGREGATIONS}")

    @classmethod
    def parse_aggregation(cls, text: str) -> tuple[str, int]:
        """Parse ``max``, ``sum``, ``single:K`` or ``single(K)``."""
        text = text.strip()
        if text in ("max", "sum"):
            return text, 0
        for sep in (":", "("):
            if text.startswith("single" + sep):
                return "single", int(text[len("single") + 1:].rstrip(")"))
        raise ValueError(f"cannot parse aggregation {text!r}")

    def label(self) -> str:
        return self.kind if self.kind == "bottleneck" else f"wasserstein(q={self.q:g})"


@dataclass(frozen=True)
class Matching:
    """Witness matching: (i, j) pairs with i indexing D1, j indexing D2, None = diagonal."""

    pairs: tuple[tuple[int | None, int | None], ...]
    cost: float


def _as_points(diag: DiagramLike) -> np.ndarray:
    if isinstance(diag, PersistenceDiagram):
        present = {p.dim for p in diag.points}
        if len(present) > 1:
            raise ValueError(f"expected a single homology degree, got {sorted(present)}")
        arr = np.array([(p.birth, p.death) for p in diag.points], dtype=np.float64).reshape(-1, 2)
    else:
        arr = np.asarray(diag, dtype=np.float64).reshape(-1, 2)
    if not np.all(np.isfinite(arr)):
        raise InfiniteCoordinate("diagram has non-finite coordinates; finitize it first")
    return arr


def pair_cost(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """L-infinity distances between rows of ``a`` and rows of ``b``."""
    return np.maximum(np.abs(a[:, None, 0] - b[None, :, 0]), np.abs(a[:, None, 1] - b[None, :, 1]))


def diagonal_cost(a: np.ndarray) -> np.ndarray:
    return (a[:, 1] - a[:, 0]) / 2


def augmented_cost(p1: np.ndarray, p2: np.ndarray) -> np.ndarray:
    """(n+m) x (n+m) cost matrix, +inf marking forbidden pairs.

    Rows: D1 points, then diagonal slots for D2 points.
    Columns: D2 points, then diagonal slots for D1 points.
    """
    n, m = len(p1), len(p2)
    cost = np.full((n + m, n + m), np.inf)
    cost[:n, :m] = pair_cost(p1, p2)
    cost[np.arange(n), m + np.arange(n)] = diagonal_cost(p1)
    cost[n + np.arange(m), np.arange(m)] = diagonal_cost(p2)
    cost[n:, m:] = 0.0
    return cost


def _to_matching(rows, cols, n: int, m: int) -> list[tuple[int | None, int | None]]:
    pairs = []
    for r, c in zip(rows, cols):
        i = int(r) if r < n else None
        j = int(c) if c < m else None
        if i is None and j is None:
            continue
        pairs.append((i, j))
    return pairs


def matching_costs(p1: np.ndarray, p2: np.ndarray, pairs) -> np.ndarray:
    """Cost of each pair of a matching, recomputed from the coordinates."""
    out = []
    for i, j in pairs:
        if i is not None and j is not None:
            out.append(max(abs(p1[i, 0] - p2[j, 0]), abs(p1[i, 1] - p2[j, 1])))
        elif i is not None:
            out.append((p1[i, 1] - p1[i, 0]) / 2)
        else:
            out.append((p2[j, 1] - p2[j, 0]) / 2)
    return np.array(out, dtype=np.float64)


def bottleneck(d1: DiagramLike, d2: DiagramLike) -> tuple[float, Matching]:
    """Exact bottleneck distance with a witness matching.

    Binary search over the sorted candidate costs; a candidate is feasible when
    the graph of pairs no more expensive than it has a perfect matching.
    """
    p1, p2 = _as_points(d1), _as_points(d2)
    n, m = len(p1), len(p2)
    if n + m == 0:
        return 0.0, Matching((), 0.0)
    cost = augmented_cost(p1, p2)
    candidates = np.unique(cost[np.isfinite(cost)])

    def perfect(eps: float):
        adjacency = [np.flatnonzero(row <= eps).tolist() for row in cost]
        size, match = hopcroft_karp(adjacency, n + m)
        return size == n + m, match

    lo, hi = 0, len(candidates) - 1
    best = None
    while lo <= hi:
        mid = (lo + hi) // 2
        ok, match = perfect(candidates[mid])
        if ok:
            best, hi = (mid, match), mid - 1
        else:
            lo = mid + 1
    assert best is not None, "the all-diagonal matching is always feasible"
    idx, match = best
    pairs = _to_matching(range(n + m), match, n, m)
    value = float(candidates[idx])
    # witness cost may be below the candidate only when every pair costs 0
    witness = matching_costs(p1, p2, pairs)
    return value, Matching(tuple(pairs), float(witness.max()) if len(witness) else 0.0)


def wasserstein(d1: DiagramLike, d2: DiagramLike, q: float = 1.0) -> tuple[float, Matching]:
    """Exact q-Wasserstein distance, solved as a linear assignment problem."""
    if not q >= 1:
        raise InvalidOrder(f"Wasserstein order must be >= 1, got {q}")
    p1, p2 = _as_points(d1), _as_points(d2)
    n, m = len(p1), len(p2)
    if n + m == 0:
        return 0.0, Matching((), 0.0)
    cost = augmented_cost(p1, p2) ** q
    rows, cols = linear_sum_assignment(cost)
    pairs = _to_matching(rows, cols, n, m)
    value = _q_norm(matching_costs(p1, p2, pairs), q)
    return value, Matching(tuple(pairs), value)


def _q_norm(costs: np.ndarray, q: float) -> float:
    if not len(costs):
        return 0.0
    return float(math.fsum(costs ** q) ** (1.0 / q))


def degree_distances(d1: PersistenceDiagram, d2: PersistenceDiagram,
                     metric: DiagramMetric) -> dict[int, float]:
    """Distance between the two diagrams in every degree either one reports."""
    out = {}
    for k in sorted(set(d1.degrees) | set(d2.degrees)):
        a, b = d1.degree(k), d2.degree(k)
        if metric.kind == "bottleneck":
            out[k] = bottleneck(a, b)[0]
        else:
            out[k] = wasserstein(a, b, metric.q)[0]
    return out


def aggregate(per_degree: dict[int, float], metric: DiagramMetric) -> float:
    if metric.aggregation == "single":
        return per_degree.get(metric.degree, 0.0)
    if not per_degree:
        return 0.0
    if metric.aggregation == "sum":
        return math.fsum(per_degree.values())
    return max(per_degree.values())


def diagram_distance(d1: PersistenceDiagram, d2: PersistenceDiagram,
                     metric: DiagramMetric = DiagramMetric()) -> float:
    return aggregate(degree_distances(d1, d2, metric), metric)
