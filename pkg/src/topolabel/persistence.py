"""Persistence diagrams of a filtration by boundary-matrix reduction over Z/2."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Literal

import numpy as np

from .errors import InvalidFiltration
from .filtration import Filtration

EssentialPolicy = Literal["drop", "cap"]
ESSENTIAL_POLICIES = ("drop", "cap")


@dataclass(frozen=True, order=True)
class PersistencePoint:
    dim: int
    birth: float
    death: float

    def __post_init__(self):
        if not self.death >= self.birth:
            raise ValueError(f"death {self.death} precedes birth {self.birth}")
        if self.birth < 0:
            raise ValueError(f"negative birth {self.birth}")

    @property
    def persistence(self) -> float:
        return self.death - self.birth


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of (birth, death) pairs per homology degree.

    ``degrees`` lists the degrees the diagram speaks for, including ones
    with no points. ``essential_policy`` is None until :func:`finitize` runs.
    """

    points: tuple[PersistencePoint, ...]
    degrees: tuple[int, ...] = ()
    enclosing_radius: float = 0.0
    essential_policy: str | None = None

    def __post_init__(self):
        pts = tuple(sorted(p for p in self.points if p.death > p.birth))
        object.__setattr__(self, "points", pts)
        degrees = set(self.degrees) | {p.dim for p in pts}
        object.__setattr__(self, "degrees", tuple(sorted(degrees)))

    def __len__(self) -> int:
        return len(self.points)

    def degree(self, k: int) -> np.ndarray:
        """(m, 2) array of (birth, death) rows in degree ``k``."""
        rows = [(p.birth, p.death) for p in self.points if p.dim == k]
        return np.array(rows, dtype=np.float64).reshape(-1, 2)

    def betti(self, k: int, r: float) -> int:
        """Number of degree-k classes alive at scale r (birth <= r < death)."""
        return sum(1 for p in self.points if p.dim == k and p.birth <= r < p.death)

    def essential(self) -> list[PersistencePoint]:
        return [p for p in self.points if math.isinf(p.death)]

    def to_json(self) -> str:
        rows = [{"dim": p.dim, "birth": p.birth,
                 "death": "inf" if math.isinf(p.death) else p.death} for p in self.points]
        return json.dumps(rows)

    @classmethod
    def from_json(cls, text: str) -> "PersistenceDiagram":
        rows = json.loads(text)
        if not isinstance(rows, list):
            raise ValueError("diagram JSON must be an array of {dim, birth, death}")
        pts = []
        for row in rows:
            death = row["death"]
            death = math.inf if death == "inf" else float(death)
            pts.append(PersistencePoint(int(row["dim"]), float(row["birth"]), death))
        return cls(tuple(pts))


def _encode(verts: np.ndarray, base: int) -> np.ndarray:
    key = np.zeros(len(verts), dtype=np.int64)
    for c in range(verts.shape[1]):
        key = key * base + verts[:, c]
    return key


def _facets(filt: Filtration) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Per dimension: filtration positions, and facet ranks of every simplex.

    A simplex's rank is its index among simplices of the same dimension in
    filtration order. ``facets[d]`` is a (count_d, d + 1) array of ranks into
    dimension d - 1. Validates the face property.
    """
    dims = filt.dims
    top = int(dims.max()) if len(filt) else 0
    base = int(filt.vertices.max()) + 1 if len(filt) else 1
    if base ** (top + 1) >= 2 ** 62:
        raise InvalidFiltration("too many vertices to index this filtration")
    positions, facets = [], []
    sorted_keys, order = [], []
    for d in range(top + 1):
        pos = np.flatnonzero(dims == d)
        verts = filt.vertices[pos, : d + 1]
        keys = _encode(verts, base)
        o = np.argsort(keys, kind="stable")
        sk = keys[o]
        if len(sk) > 1 and np.any(sk[1:] == sk[:-1]):
            raise InvalidFiltration(f"duplicate {d}-simplex in filtration")
        positions.append(pos)
        sorted_keys.append(sk)
        order.append(o)
        if d == 0:
            facets.append(np.empty((len(pos), 0), dtype=np.int64))
            continue
        ranks = np.empty((len(pos), d + 1), dtype=np.int64)
        prev_keys, prev_order = sorted_keys[d - 1], order[d - 1]
        for c in range(d + 1):
            face_keys = _encode(np.delete(verts, c, axis=1), base)
            idx = np.searchsorted(prev_keys, face_keys)
            idx_clip = np.minimum(idx, max(len(prev_keys) - 1, 0))
            found = (idx < len(prev_keys)) & (prev_keys[idx_clip] == face_keys) if len(prev_keys) else \
                np.zeros(len(face_keys), dtype=bool)
            if not np.all(found):
                bad = int(np.flatnonzero(~found)[0])
                raise InvalidFiltration(f"a face of simplex {tuple(verts[bad].tolist())} is missing")
            ranks[:, c] = prev_order[idx_clip]
        late = (positions[d - 1][ranks] > pos[:, None]) | \
            (filt.values[positions[d - 1][ranks]] > filt.values[pos][:, None])
        if np.any(late):
            bad = int(np.flatnonzero(late.any(axis=1))[0])
            raise InvalidFiltration(f"a face of simplex {tuple(verts[bad].tolist())} enters after it")
        facets.append(ranks)
    return positions, facets


def _reduce_dim(facets: np.ndarray, cleared: set[int], stop_after: int | None = None):
    """Column reduction of one boundary block; columns are int bitsets over row ranks.

    Returns ``(pairs, zero_columns, scanned)``: (row rank, column rank) pairs,
    ranks of columns that reduced to zero, and how many columns were looked at.
    With ``stop_after`` the scan ends once that many pairs exist.
    """
    pivot_of: dict[int, int] = {}
    pairs: list[tuple[int, int]] = []
    zero: list[int] = []
    if stop_after == 0:
        return pairs, zero, 0
    rows = facets.tolist()
    lookup = pivot_of.get
    scanned = 0
    for j, faces in enumerate(rows):
        scanned = j + 1
        if j in cleared:
            zero.append(j)
            continue
        col = 0
        for f in faces:
            col ^= 1 << f
        while col:
            low = col.bit_length() - 1
            other = lookup(low)
            if other is None:
                break
            col ^= other
        if not col:
            zero.append(j)
            continue
        pivot_of[low] = col
        pairs.append((low, j))
        if stop_after is not None and len(pairs) == stop_after:
            break
    return pairs, zero, scanned


def _union_find(edge_facets: np.ndarray, n_vertices: int):
    """Zero-dimensional pairing by union-find with the elder rule."""
    parent = list(range(n_vertices))

    def find(a):
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    pairs, positive = [], []
    for j, (u, v) in enumerate(edge_facets.tolist()):
        ru, rv = find(u), find(v)
        if ru == rv:
            positive.append(j)
            continue
        # roots are the oldest vertex of their component; the younger one dies
        young, old = (ru, rv) if ru > rv else (rv, ru)
        parent[young] = old
        pairs.append((young, j))
    return pairs, positive


def _pairs(filt: Filtration, clearing: bool, union_find_h0: bool):
    """Persistence pairs as ((dim, rank) birth, (dim, rank) death) plus unpaired creators."""
    positions, facets = _facets(filt)
    top = len(positions) - 1
    paired: list[tuple[int, int, int]] = []  # (birth dim, birth rank, death rank)
    creators: dict[int, set[int]] = {d: set() for d in range(top + 1)}
    creators[0] = set(range(len(positions[0])))

    dims_todo = list(range(1, top + 1))
    if union_find_h0 and top >= 1:
        pairs, positive = _union_find(facets[1], len(positions[0]))
        paired.extend((0, b, j) for b, j in pairs)
        creators[1].update(positive)
        dims_todo.remove(1)

    cleared: dict[int, set[int]] = {d: set() for d in range(top + 2)}
    order = sorted(dims_todo, reverse=clearing)
    for d in order:
        stop_after = None
        if d == top == filt.max_dim == 2 and union_find_h0:
            # every positive edge either dies or stays essential; none is left to find after this
            stop_after = len(creators[1])
        pairs, zero, scanned = _reduce_dim(facets[d], cleared[d], stop_after)
        for low, j in pairs:
            paired.append((d - 1, low, j))
            if clearing:
                cleared[d - 1].add(low)
        creators[d].update(zero)
        # columns past an early stop are creators of degree-d classes, never reported
        creators[d].update(range(scanned, len(positions[d])))
    births = {(d, b) for d, b, _ in paired}
    essential = [(d, r) for d, rs in creators.items() for r in rs if (d, r) not in births]
    return positions, paired, essential


def compute_persistence(filt: Filtration, clearing: bool = True,
                        union_find_h0: bool | None = None) -> PersistenceDiagram:
    """Persistence diagram of ``filt`` in degrees 0 .. max_dim - 1.

    Degree ``max_dim`` is not reported: without (max_dim + 1)-simplices its
    classes never die. Classes that survive the whole filtration get death
    +inf. Zero-persistence pairs are dropped.

    ``clearing`` reduces dimensions top-down and skips columns already known
    to be zero. ``union_find_h0`` (defaults to ``clearing``) pairs vertices
    with edges by union-find instead of matrix reduction.
    """
    if union_find_h0 is None:
        union_find_h0 = clearing
    positions, paired, essential = _pairs(filt, clearing, union_find_h0)
    reported = range(filt.max_dim)
    values = filt.values
    pts = []
    for k, b, d in paired:
        if k in reported:
            birth, death = values[positions[k][b]], values[positions[k + 1][d]]
            if death > birth:
                pts.append(PersistencePoint(k, float(birth), float(death)))
    for k, r in essential:
        if k in reported:
            pts.append(PersistencePoint(k, float(values[positions[k][r]]), math.inf))
    return PersistenceDiagram(tuple(pts), degrees=tuple(reported),
                              enclosing_radius=filt.enclosing_radius)


def finitize(diag: PersistenceDiagram, policy: EssentialPolicy = "cap") -> PersistenceDiagram:
    """Remove infinite deaths, either by dropping or capping at the enclosing radius."""
    if policy not in ESSENTIAL_POLICIES:
        raise ValueError(f"unknown essential policy {policy!r}; expected one of {ESSENTIAL_POLICIES}")
    pts = []
    for p in diag.points:
        if math.isinf(p.death):
            if policy == "drop":
                continue
            p = PersistencePoint(p.dim, p.birth, max(p.birth, diag.enclosing_radius))
        pts.append(p)
    return replace(diag, points=tuple(pts), essential_policy=policy)
