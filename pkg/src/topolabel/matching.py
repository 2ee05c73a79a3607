"""Hopcroft-Karp maximum cardinality matching on a bipartite graph."""
from __future__ import annotations

from collections import deque
from typing import Sequence

_UNMATCHED = -1


def hopcroft_karp(adjacency: Sequence[Sequence[int]], n_right: int) -> tuple[int, list[int]]:
    """Maximum matching of a bipartite graph given as left -> right adjacency lists.

    Returns the matching size and ``match_left`` where ``match_left[u]`` is the
    right vertex matched to left vertex ``u`` (or -1).
    """
    n_left = len(adjacency)
    match_left = [_UNMATCHED] * n_left
    match_right = [_UNMATCHED] * n_right
    inf = n_left + n_right + 1
    layer = [0] * n_left

    def bfs() -> bool:
        queue = deque()
        for u in range(n_left):
            if match_left[u] == _UNMATCHED:
                layer[u] = 0
                queue.append(u)
            else:
                layer[u] = inf
        found = False
        while queue:
            u = queue.popleft()
            for v in adjacency[u]:
                w = match_right[v]
                if w == _UNMATCHED:
                    found = True
                elif layer[w] == inf:
                    layer[w] = layer[u] + 1
                    queue.append(w)
        return found

    def dfs(root: int) -> bool:
        # iterative DFS along the BFS layers; stack holds (left vertex, next edge index)
        stack = [[root, 0]]
        path = []
        while stack:
            frame = stack[-1]
            u, e = frame
            edges = adjacency[u]
            advanced = False
            while e < len(edges):
                v = edges[e]
                e += 1
                w = match_right[v]
                if w == _UNMATCHED:
                    frame[1] = e
                    path.append((u, v))
                    for a, b in path:
                        match_left[a] = b
                        match_right[b] = a
                    return True
                if layer[w] == layer[u] + 1:
                    frame[1] = e
                    path.append((u, v))
                    stack.append([w, 0])
                    advanced = True
                    break
            if not advanced:
                layer[u] = inf
                stack.pop()
                if path:
                    path.pop()
        return False

    size = 0
    while bfs():
        for u in range(n_left):
            if match_left[u] == _UNMATCHED and dfs(u):
                size += 1
    return size, match_left
