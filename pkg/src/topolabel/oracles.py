"""Brute-force reference computations used to cross-check the fast paths.

Nothing here imports the filtration, persistence or distance code: every
quantity is recomputed from raw coordinates by exhaustive enumeration.
"""
from __future__ import annotations

import itertools
import math
from typing import Sequence

import numpy as np


def naive_distances(points: Sequence[Sequence[float]]) -> list[list[float]]:
    n = len(points)
    out = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                out[i][j] = math.sqrt(sum((a - b) ** 2 for a, b in zip(points[i], points[j])))
    return out


def rips_simplices(points, max_dim: int, radius: float = math.inf) -> dict[tuple[int, ...], float]:
    """Every vertex subset of size <= max_dim + 1 with diameter <= radius."""
    dist = naive_distances(points)
    n = len(points)
    out = {}
    for size in range(1, max_dim + 2):
        for subset in itertools.combinations(range(n), size):
            diam = max((dist[a][b] for a, b in itertools.combinations(subset, 2)), default=0.0)
            if diam <= radius:
                out[subset] = diam
    return out


def gf2_rank(rows: list[int]) -> int:
    """Rank over Z/2 of a matrix whose rows are packed into Python ints."""
    rank = 0
    rows = [r for r in rows if r]
    while rows:
        pivot = rows.pop()
        if not pivot:
            continue
        rank += 1
        bit = pivot & -pivot
        rows = [r ^ pivot if r & bit else r for r in rows]
        rows = [r for r in rows if r]
    return rank


def betti_numbers(points, max_dim: int, r: float) -> list[int]:
    """Betti numbers b_0 .. b_{max_dim-1} of the Rips complex at scale r.

    The complex holds all simplices up to dimension max_dim; ranks of the
    boundary maps are computed by Gaussian elimination over Z/2.
    """
    simplices = [s for s in rips_simplices(points, max_dim, r)]
    by_dim: dict[int, list[tuple[int, ...]]] = {}
    for s in simplices:
        by_dim.setdefault(len(s) - 1, []).append(s)
    index = {k: {s: i for i, s in enumerate(v)} for k, v in by_dim.items()}

    def boundary_rank(k: int) -> int:
        # rank of the map from k-chains to (k-1)-chains
        if k == 0 or k not in by_dim:
            return 0
        rows = []
        for s in by_dim[k]:
            packed = 0
            for drop in range(len(s)):
                packed |= 1 << index[k - 1][s[:drop] + s[drop + 1:]]
            rows.append(packed)
        return gf2_rank(rows)

    return [len(by_dim.get(k, [])) - boundary_rank(k) - boundary_rank(k + 1) for k in range(max_dim)]


def _linf(a, b) -> float:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def brute_force_distances(d1, d2, qs: Sequence[float] = (1.0, 2.0)) -> tuple[float, dict[float, float]]:
    """Bottleneck and q-Wasserstein distances by enumerating every partial matching.

    Each point of ``d1`` is either sent to the diagonal or matched to a distinct
    point of ``d2``; leftover points of ``d2`` go to the diagonal.
    """
    d1 = [tuple(map(float, p)) for p in d1]
    d2 = [tuple(map(float, p)) for p in d2]
    diag1 = [(p[1] - p[0]) / 2 for p in d1]
    diag2 = [(p[1] - p[0]) / 2 for p in d2]
    cross = [[_linf(a, b) for b in d2] for a in d1]

    best_max = math.inf
    best_sum = {q: math.inf for q in qs}

    def visit(i: int, used: tuple[bool, ...], costs: list[float]):
        nonlocal best_max
        if i == len(d1):
            full = costs + [diag2[j] for j in range(len(d2)) if not used[j]]
            best_max = min(best_max, max(full, default=0.0))
            for q in qs:
                best_sum[q] = min(best_sum[q], math.fsum(c ** q for c in full))
            return
        visit(i + 1, used, costs + [diag1[i]])
        for j in range(len(d2)):
            if not used[j]:
                visit(i + 1, used[:j] + (True,) + used[j + 1:], costs + [cross[i][j]])

    visit(0, (False,) * len(d2), [])
    return best_max, {q: best_sum[q] ** (1.0 / q) for q in qs}


def random_cloud(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    return rng.uniform(0.0, 1.0, size=(n, dim))


def random_diagram(rng: np.random.Generator, size: int, scale: float = 1.0) -> np.ndarray:
    births = rng.uniform(0.0, scale, size)
    deaths = births + rng.uniform(0.0, scale, size)
    return np.column_stack([births, deaths]).reshape(-1, 2)
