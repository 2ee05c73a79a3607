"""Vietoris-Rips filtrations built from a distance matrix."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Literal, Sequence

import numpy as np

from .errors import InvalidRadius
from .geometry import DistanceMatrix

# rows of the candidate mask are produced in chunks of this many simplices
_CHUNK = 4096


@dataclass(frozen=True)
class Simplex:
    vertices: tuple[int, ...]
    value: float

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True, eq=False)
class Filtration:
    """Simplices in filtration order, stored column-wise.

    ``vertices`` is an (N, max_dim + 1) integer array padded with -1;
    row ``i`` describes the i-th simplex, whose dimension is ``dims[i]``
    and whose filtration value is ``values[i]``.
    """

    vertices: np.ndarray
    dims: np.ndarray
    values: np.ndarray
    max_dim: int
    enclosing_radius: float
    radius: float = np.inf

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[Simplex]:
        for i in range(len(self)):
            yield self[i]

    def __getitem__(self, i: int) -> Simplex:
        k = int(self.dims[i])
        return Simplex(tuple(int(v) for v in self.vertices[i, : k + 1]), float(self.values[i]))

    @property
    def simplices(self) -> list[Simplex]:
        return list(self)

    def count(self, dim: int) -> int:
        return int(np.count_nonzero(self.dims == dim))

    @classmethod
    def from_simplices(cls, simplices: Sequence[Simplex], enclosing_radius: float = 0.0,
                       max_dim: int | None = None) -> "Filtration":
        """Sort arbitrary simplices into filtration order (no validation)."""
        if max_dim is None:
            max_dim = max((s.dim for s in simplices), default=0)
        width = max_dim + 1
        verts = np.full((len(simplices), width), -1, dtype=np.int64)
        for i, s in enumerate(simplices):
            verts[i, : len(s.vertices)] = sorted(s.vertices)
        dims = np.array([s.dim for s in simplices], dtype=np.int64)
        values = np.array([s.value for s in simplices], dtype=np.float64)
        return _sorted(verts, dims, values, max_dim, float(enclosing_radius), np.inf)

    def to_text(self) -> str:
        """One simplex per line: ``dim v0 ... vk value``."""
        lines = []
        for s in self:
            lines.append(" ".join([str(s.dim), *map(str, s.vertices), repr(s.value)]))
        return "\n".join(lines) + ("\n" if lines else "")


def _sorted(verts, dims, values, max_dim, enclosing, radius) -> Filtration:
    # np.lexsort: last key is primary -> (value, dim, v0, v1, ...)
    keys = [verts[:, c] for c in reversed(range(verts.shape[1]))] + [dims, values]
    order = np.lexsort(keys)
    verts, dims, values = verts[order], dims[order], values[order]
    for a in (verts, dims, values):
        a.setflags(write=False)
    return Filtration(verts, dims, values, max_dim, enclosing, radius)


def _cofaces(simplices: np.ndarray, values: np.ndarray, dist: np.ndarray,
             adj: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Extend each k-simplex by every larger vertex adjacent to all of its vertices."""
    n = dist.shape[0]
    out_s, out_v = [], []
    cols = np.arange(n)
    for start in range(0, len(simplices), _CHUNK):
        s = simplices[start:start + _CHUNK]
        val = values[start:start + _CHUNK]
        mask = cols[None, :] > s[:, -1:]
        for c in range(s.shape[1]):
            mask &= adj[s[:, c]]
        rows, new = np.nonzero(mask)
        if not len(rows):
            continue
        v = val[rows]
        for c in range(s.shape[1]):
            v = np.maximum(v, dist[s[rows, c], new])
        out_s.append(np.column_stack([s[rows], new]))
        out_v.append(v)
    width = simplices.shape[1] + 1
    if not out_s:
        return np.empty((0, width), dtype=np.int64), np.empty(0)
    return np.vstack(out_s), np.concatenate(out_v)


def build_rips(dmat: DistanceMatrix, max_dim: int = 2,
               max_radius: float | Literal["auto"] = "auto") -> Filtration:
    """Vietoris-Rips filtration of ``dmat`` with simplices of dimension <= max_dim.

    Each simplex enters at its diameter. Only simplices with diameter <= the
    effective radius are kept; ``"auto"`` uses the enclosing radius, past which
    homology in degree >= 1 is trivial. ``max_dim`` is clamped to n - 1.
    """
    if max_dim < 0:
        raise ValueError("max_dim must be non-negative")
    n = dmat.n
    enclosing = dmat.enclosing_radius()
    if isinstance(max_radius, str):
        if max_radius != "auto":
            raise InvalidRadius(f"unknown radius {max_radius!r}")
        radius = enclosing
    else:
        radius = float(max_radius)
        if np.isnan(radius) or radius < 0:
            raise InvalidRadius(f"radius must be non-negative, got {max_radius}")
    top = min(max_dim, max(n - 1, 0))

    dist = dmat.entries
    adj = dist <= radius
    np.fill_diagonal(adj, False)

    width = max_dim + 1
    blocks_s = [np.arange(n, dtype=np.int64)[:, None]]
    blocks_v = [np.zeros(n)]
    blocks_d = [np.zeros(n, dtype=np.int64)]
    cur_s, cur_v = blocks_s[0], blocks_v[0]
    for k in range(1, top + 1):
        cur_s, cur_v = _cofaces(cur_s, cur_v, dist, adj)
        blocks_s.append(cur_s)
        blocks_v.append(cur_v)
        blocks_d.append(np.full(len(cur_v), k, dtype=np.int64))
        if not len(cur_v):
            break

    verts = np.full((sum(len(b) for b in blocks_v), width), -1, dtype=np.int64)
    row = 0
    for b in blocks_s:
        verts[row:row + len(b), : b.shape[1]] = b
        row += len(b)
    return _sorted(verts, np.concatenate(blocks_d), np.concatenate(blocks_v),
                   max_dim, enclosing, radius)
