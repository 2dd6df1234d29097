"""From-scratch reference answers used to audit the engines."""
from __future__ import annotations

import numpy as np

from ..graph import HOP_BASE, INF, DynamicGraph


def lex_bellman_ford(g: DynamicGraph, s: int) -> list | None:
    """Packed ``(length, hops)`` distances from ``s``; None if a negative cycle is reachable."""
    n = g.n
    dist: list = [INF] * n
    dist[s] = 0
    edges = [(u, v, w * HOP_BASE + 1) for u, v, w in g.edges()]
    for _ in range(n):
        changed = False
        for u, v, k in edges:
            du = dist[u]
            if du != INF and du + k < dist[v]:
                dist[v] = du + k
                changed = True
        if not changed:
            return dist
    return None


def has_negative_cycle(g: DynamicGraph) -> bool:
    """Bellman-Ford from a virtual source joined to every vertex."""
    n = g.n
    d = [0] * n
    edges = g.edges()
    for _ in range(n + 1):
        changed = False
        for u, v, w in edges:
            if d[u] + w < d[v]:
                d[v] = d[u] + w
                changed = True
        if not changed:
            return False
    return True


class ApspOracle:
    """Bellman-Ford answers cached per graph version and source."""

    def __init__(self):
        self._version = None
        self._rows: dict[int, list | None] = {}
        self._cycle: bool | None = None

    def _sync(self, g: DynamicGraph) -> None:
        if g.version != self._version:
            self._version = g.version
            self._rows = {}
            self._cycle = None

    def negative_cycle(self, g: DynamicGraph) -> bool:
        self._sync(g)
        if self._cycle is None:
            self._cycle = has_negative_cycle(g)
        return self._cycle

    def distance(self, g: DynamicGraph, s: int, t: int):
        self._sync(g)
        if s not in self._rows:
            self._rows[s] = lex_bellman_ford(g, s)
        row = self._rows[s]
        if row is None:
            # a negative cycle reachable from s; callers check negative_cycle first
            return None
        return 0 if s == t else row[t]


def path_key(g: DynamicGraph, path) -> int | None:
    """Packed length of ``path`` in ``g``, or None if some edge is missing."""
    total = 0
    for u, v in zip(path, path[1:]):
        if not g.has_edge(u, v):
            return None
        total += g.weight(u, v) * HOP_BASE + 1
    return total


def dfs_reachable(g: DynamicGraph, s: int, t: int) -> bool:
    seen = bytearray(g.n)
    seen[s] = 1
    stack = [s]
    while stack:
        u = stack.pop()
        if u == t:
            return True
        for v in g.out_adj[u]:
            if not seen[v]:
                seen[v] = 1
                stack.append(v)
    return False


def identity_minus_adjacency(g: DynamicGraph, p: int) -> np.ndarray:
    dtype = np.int64 if p < (1 << 31) else object
    M = np.eye(g.n, dtype=np.int64).astype(dtype)
    for u, v, _ in g.edges():
        M[u, v] = (M[u, v] - 1) % p
    return M


def inverse_mod_p(M: np.ndarray, p: int) -> np.ndarray:
    """Gauss-Jordan inverse over Z/pZ; raises ValueError if ``M`` is singular."""
    n = M.shape[0]
    dtype = np.int64 if p < (1 << 31) else object
    A = np.concatenate([np.asarray(M, dtype=dtype) % p, np.eye(n, dtype=np.int64).astype(dtype)], axis=1)
    for c in range(n):
        nz = np.flatnonzero(A[c:, c] % p)
        if not len(nz):
            raise ValueError("matrix is singular mod p")
        r = c + int(nz[0])
        if r != c:
            A[[c, r]] = A[[r, c]]
        A[c] = (A[c] * pow(int(A[c, c]), -1, p)) % p
        f = A[:, c].copy()
        f[c] = 0
        rows = np.flatnonzero(f)
        if len(rows):
            A[rows] = (A[rows] - (f[rows, None] * A[c][None, :]) % p) % p
    return A[:, n:]


def count_paths(g: DynamicGraph, s: int, t: int) -> int:
    """Number of ``s -> t`` paths in a DAG by plain enumeration (tiny graphs only)."""
    if s == t:
        return 1
    return sum(count_paths(g, v, t) for v in g.out_adj[s])
