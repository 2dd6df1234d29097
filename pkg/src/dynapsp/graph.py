"""Sparse dynamic digraph and the single-source primitives built on it.

Lengths are compared lexicographically as ``(length, hops)`` pairs.  Inside the
hot loops a pair is packed into one Python integer,
``length * HOP_BASE + hops``, which orders exactly like the pair as long as a
path has fewer than ``HOP_BASE`` hops.  ``math.inf`` plays the role of the
unreachable key; it is absorbing under addition and compares above every int.
"""
from __future__ import annotations

import enum
import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy.sparse import csgraph, csr_matrix

from .errors import MalformedUpdateError, ModeError, StalePriceError

HOP_BASE = 1 << 32
MAX_ABS_WEIGHT = 1 << 62
INF = math.inf


class LexWeight(NamedTuple):
    """Path weight ``(length, hops)`` ordered lexicographically."""

    length: int | float
    hops: int

    def __add__(self, other):  # type: ignore[override]
        if self.is_inf or other.is_inf:
            return LEX_INF
        return LexWeight(self.length + other.length, self.hops + other.hops)

    @property
    def is_inf(self) -> bool:
        return self.length == INF

    @property
    def key(self) -> int | float:
        return INF if self.is_inf else self.length * HOP_BASE + self.hops

    @classmethod
    def from_key(cls, key: int | float) -> "LexWeight":
        if key == INF:
            return LEX_INF
        length, hops = divmod(key, HOP_BASE)
        return cls(length, hops)

    def __repr__(self) -> str:
        return "LexWeight(INF)" if self.is_inf else f"LexWeight({self.length}, {self.hops})"


LEX_INF = LexWeight(INF, 0)
LEX_ZERO = LexWeight(0, 0)


def edge_key(w: int) -> int:
    """Packed lexicographic weight of a single edge of weight ``w``."""
    return w * HOP_BASE + 1


class Direction(enum.Enum):
    FORWARD = "forward"
    REVERSE = "reverse"


FORWARD = Direction.FORWARD
REVERSE = Direction.REVERSE


@dataclass
class ChangeSet:
    removed: list[tuple[int, int, int]] = field(default_factory=list)
    added: list[tuple[int, int, int]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return bool(self.removed or self.added)


class DynamicGraph:
    """Directed graph on vertices ``0..n-1`` with integer edge weights.

    ``out_adj[u]`` maps each out-neighbour to the edge weight and ``in_adj[v]``
    is its mirror image.  Both are kept in ascending neighbour order so that
    every scan is reproducible.  Parallel edges and self-loops are rejected.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        self.out_adj: list[dict[int, int]] = [{} for _ in range(n)]
        self.in_adj: list[dict[int, int]] = [{} for _ in range(n)]
        self.m = 0
        self.version = 0
        self._non_unit = 0
        touched = set()
        for u, v, w in edges:
            self._check_edge(u, v, w)
            if v in self.out_adj[u]:
                raise MalformedUpdateError(f"parallel edge {u}->{v}")
            self._link(u, v, w)
            touched.update((u, v))
        for x in touched:
            self._resort(x)

    # -- basic queries -------------------------------------------------------
    def has_edge(self, u: int, v: int) -> bool:
        return v in self.out_adj[u]

    def weight(self, u: int, v: int) -> int:
        return self.out_adj[u][v]

    def edges(self) -> list[tuple[int, int, int]]:
        return [(u, v, w) for u in range(self.n) for v, w in self.out_adj[u].items()]

    def in_degree(self, v: int) -> int:
        return len(self.in_adj[v])

    def out_degree(self, v: int) -> int:
        return len(self.out_adj[v])

    def degree(self, v: int) -> int:
        return len(self.in_adj[v]) + len(self.out_adj[v])

    @property
    def is_unweighted(self) -> bool:
        return self._non_unit == 0

    def copy(self) -> "DynamicGraph":
        g = DynamicGraph(self.n)
        g.out_adj = [dict(a) for a in self.out_adj]
        g.in_adj = [dict(a) for a in self.in_adj]
        g.m = self.m
        g.version = self.version
        g._non_unit = self._non_unit
        return g

    def __repr__(self) -> str:
        return f"DynamicGraph(n={self.n}, m={self.m}, version={self.version})"

    # -- mutation ------------------------------------------------------------
    def apply_vertex_update(
        self,
        v: int,
        new_out: Sequence[tuple[int, int]],
        new_in: Sequence[tuple[int, int]],
    ) -> ChangeSet:
        """Replace every edge incident to ``v``.

        ``new_out`` holds ``(u, w)`` pairs for edges ``v->u`` and ``new_in``
        holds ``(u, w)`` pairs for edges ``u->v``.
        """
        self._check_vertex(v)
        for label, items in (("out", new_out), ("in", new_in)):
            seen = set()
            for u, w in items:
                if u in seen:
                    raise MalformedUpdateError(f"duplicate {label}-neighbour {u} in update of {v}")
                seen.add(u)
                if label == "out":
                    self._check_edge(v, u, w)
                else:
                    self._check_edge(u, v, w)

        changes = ChangeSet()
        for u, w in list(self.out_adj[v].items()):
            changes.removed.append((v, u, w))
            self._unlink(v, u)
        for u, w in list(self.in_adj[v].items()):
            changes.removed.append((u, v, w))
            self._unlink(u, v)
        touched = {v}
        for u, w in new_out:
            self._link(v, u, w)
            changes.added.append((v, u, w))
            touched.add(u)
        for u, w in new_in:
            self._link(u, v, w)
            changes.added.append((u, v, w))
            touched.add(u)
        for x in touched:
            self._resort(x)
        self.version += 1
        return changes

    def add_edge(self, u: int, v: int, w: int = 1) -> None:
        self._check_edge(u, v, w)
        if v in self.out_adj[u]:
            raise MalformedUpdateError(f"edge {u}->{v} already present")
        self._link(u, v, w)
        self._resort(u)
        self._resort(v)
        self.version += 1

    def remove_edge(self, u: int, v: int) -> int:
        if v not in self.out_adj[u]:
            raise MalformedUpdateError(f"edge {u}->{v} not present")
        w = self.out_adj[u][v]
        self._unlink(u, v)
        self.version += 1
        return w

    # -- internals -----------------------------------------------------------
    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise MalformedUpdateError(f"vertex {v} out of range [0, {self.n})")

    def _check_edge(self, u: int, v: int, w: int) -> None:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise MalformedUpdateError(f"self-loop at {u}")
        if not isinstance(w, int) or abs(w) >= MAX_ABS_WEIGHT:
            raise MalformedUpdateError(f"weight {w!r} of {u}->{v} is not an integer below 2^62")

    def _link(self, u: int, v: int, w: int) -> None:
        self.out_adj[u][v] = w
        self.in_adj[v][u] = w
        self.m += 1
        if w != 1:
            self._non_unit += 1

    def _unlink(self, u: int, v: int) -> None:
        w = self.out_adj[u].pop(v)
        del self.in_adj[v][u]
        self.m -= 1
        if w != 1:
            self._non_unit -= 1

    def _resort(self, x: int) -> None:
        for adj in (self.out_adj, self.in_adj):
            keys = list(adj[x])
            if any(a > b for a, b in zip(keys, keys[1:])):
                adj[x] = dict(sorted(adj[x].items()))


def _mask(n: int, forbidden) -> bytearray:
    if isinstance(forbidden, bytearray) and len(forbidden) == n:
        return forbidden
    mask = bytearray(n)
    for v in forbidden:
        mask[v] = 1
    return mask


@dataclass
class PriceFunction:
    """Vertex potentials with non-negative reduced weights, or a witness cycle."""

    p: list[int] | None
    negative_cycle: list[int] | None = None

    @property
    def feasible(self) -> bool:
        return self.p is not None

    @classmethod
    def zero(cls, n: int) -> "PriceFunction":
        return cls([0] * n)


def is_feasible(g: DynamicGraph, p: Sequence[int]) -> bool:
    return all(w + p[u] - p[v] >= 0 for u, v, w in g.edges())


@dataclass
class ShortestPathTree:
    """Single-source (``FORWARD``) or single-target (``REVERSE``) tree.

    ``dist`` holds packed lexicographic keys of true (not reduced) lengths.  For
    a forward tree ``parent[v]`` is the predecessor of ``v`` on the path from
    the source; for a reverse tree it is the successor of ``v`` on the path
    towards the source.
    """

    source: int
    direction: Direction
    dist: list
    parent: list
    forbidden: frozenset = frozenset()

    def lex(self, v: int) -> LexWeight:
        return LexWeight.from_key(self.dist[v])

    def path(self, v: int) -> list[int]:
        """Vertex sequence between the source and ``v`` in travel order."""
        if self.dist[v] == INF:
            raise KeyError(v)
        seq = [v]
        while seq[-1] != self.source:
            seq.append(self.parent[seq[-1]])
        if self.direction is FORWARD:
            seq.reverse()
        return seq


def dijkstra(
    g: DynamicGraph,
    source: int,
    direction: Direction = FORWARD,
    prices: PriceFunction | Sequence[int] | None = None,
    forbidden=(),
    stats: dict | None = None,
) -> ShortestPathTree:
    """Lexicographic Dijkstra on reduced weights ``w + p(u) - p(v)``.

    Ties between equally short predecessors go to the smallest vertex id.
    """
    n = g.n
    if prices is None:
        p = [0] * n
    elif isinstance(prices, PriceFunction):
        if prices.p is None:
            raise StalePriceError("no feasible price function (negative cycle)")
        p = prices.p
    else:
        p = prices
    mask = _mask(n, forbidden)
    if mask[source]:
        raise ValueError("source is forbidden")
    adj = g.out_adj if direction is FORWARD else g.in_adj
    sign = 1 if direction is FORWARD else -1
    dist: list = [INF] * n
    parent: list = [None] * n
    dist[source] = 0
    heap = [(0, source)]
    pops = relaxed = 0
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        d, u = pop(heap)
        if d > dist[u]:
            continue
        pops += 1
        pu = p[u]
        for v, w in adj[u].items():
            if mask[v]:
                continue
            relaxed += 1
            r = w + sign * (pu - p[v])
            if r < 0:
                raise StalePriceError(f"negative reduced weight on edge touching {u},{v}")
            nd = d + r * HOP_BASE + 1
            dv = dist[v]
            if nd < dv:
                dist[v] = nd
                parent[v] = u
                push(heap, (nd, v))
            elif nd == dv and u < parent[v]:
                parent[v] = u
    ps = p[source]
    for v in range(n):
        if dist[v] != INF:
            # reduced key = (len + p(s) - p(v)) * B + hops for forward trees
            dist[v] -= sign * (ps - p[v]) * HOP_BASE
    if stats is not None:
        stats["dijkstra_pops"] = stats.get("dijkstra_pops", 0) + pops
        stats["edges_relaxed"] = stats.get("edges_relaxed", 0) + relaxed
    return ShortestPathTree(source, direction, dist, parent, frozenset(i for i in range(n) if mask[i]))


_FLOAT_EXACT = 1 << 53


def dijkstra_many(
    g: DynamicGraph,
    sources: Sequence[int],
    direction: Direction = FORWARD,
    prices: Sequence[int] | None = None,
    forbidden=(),
    stats: dict | None = None,
) -> list[ShortestPathTree]:
    """``dijkstra`` from several sources at once; identical trees and tie-breaks.

    Runs in scipy's compiled Dijkstra whenever every packed key fits a float64
    exactly, then recovers the smallest-id tight predecessor of every vertex
    with numpy.  Falls back to one ``dijkstra`` call per source otherwise.
    """
    n = g.n
    sources = list(sources)
    if not sources:
        return []
    p = [0] * n if prices is None else list(prices)
    mask = _mask(n, forbidden)
    for s in sources:
        if mask[s]:
            raise ValueError("source is forbidden")
    us, vs, rs = [], [], []
    for u in range(n):
        if mask[u]:
            continue
        pu = p[u]
        for v, w in g.out_adj[u].items():
            if not mask[v]:
                r = w + pu - p[v]
                if r < 0:
                    raise StalePriceError(f"negative reduced weight on edge {u},{v}")
                us.append(u)
                vs.append(v)
                rs.append(r)
    if direction is REVERSE:
        us, vs = vs, us
    max_r = max(rs, default=0)
    max_p = max((abs(x) for x in p), default=0)
    if (n * (max_r + 1) + 2 * max_p + 2) * HOP_BASE >= _FLOAT_EXACT:
        return [dijkstra(g, s, direction, p, mask, stats) for s in sources]

    U = np.asarray(us, dtype=np.int64)
    V = np.asarray(vs, dtype=np.int64)
    R = np.asarray(rs, dtype=np.int64) * HOP_BASE + 1
    graph = csr_matrix((R.astype(np.float64), (U, V)), shape=(n, n))
    D = csgraph.dijkstra(graph, directed=True, indices=sources)
    reached = np.isfinite(D)
    Di = np.where(reached, D, -1).astype(np.int64)

    parent = np.full((len(sources), n), -1, dtype=np.int64)
    if len(U):
        order = np.lexsort((U, V))
        U, V, R = U[order], V[order], R[order]
        tight = reached[:, U] & (Di[:, U] + R[None, :] == Di[:, V])
        cand = np.where(tight, U[None, :], n)
        heads = np.flatnonzero(np.r_[True, V[1:] != V[:-1]])
        best = np.minimum.reduceat(cand, heads, axis=1)
        cols = V[heads]
        parent[:, cols] = np.where(best < n, best, -1)

    P = np.asarray(p, dtype=np.int64)
    S = np.asarray(sources, dtype=np.int64)
    sign = 1 if direction is FORWARD else -1
    true_keys = Di - sign * (P[S][:, None] - P[None, :]) * HOP_BASE
    if stats is not None:
        outdeg = np.bincount(U, minlength=n) if len(U) else np.zeros(n, dtype=np.int64)
        stats["dijkstra_pops"] = stats.get("dijkstra_pops", 0) + int(reached.sum())
        stats["edges_relaxed"] = stats.get("edges_relaxed", 0) + int((reached * outdeg[None, :]).sum())
    blocked = frozenset(i for i in range(n) if mask[i])
    keys = true_keys.astype(object)
    keys[~reached] = INF
    par = parent.astype(object)
    par[parent < 0] = None
    return [
        ShortestPathTree(s, direction, d, pr, blocked) for s, d, pr in zip(sources, keys.tolist(), par.tolist())
    ]


def bfs_tree(g: DynamicGraph, source: int, direction: Direction = FORWARD, forbidden=()) -> ShortestPathTree:
    if not g.is_unweighted:
        raise ModeError("bfs_tree requires an unweighted graph")
    n = g.n
    mask = _mask(n, forbidden)
    if mask[source]:
        raise ValueError("source is forbidden")
    adj = g.out_adj if direction is FORWARD else g.in_adj
    dist: list = [INF] * n
    parent: list = [None] * n
    dist[source] = 0
    level = [source]
    d = 0
    while level:
        d += 1
        key = d * HOP_BASE + d
        nxt = []
        # expanding a level in ascending order makes the first discoverer the
        # smallest-id predecessor, matching dijkstra's tie-break
        for u in sorted(level):
            for v in adj[u]:
                if not mask[v] and dist[v] == INF:
                    dist[v] = key
                    parent[v] = u
                    nxt.append(v)
        level = nxt
    return ShortestPathTree(source, direction, dist, parent, frozenset(i for i in range(n) if mask[i]))


@dataclass
class HopBoundedTable:
    """Result of ``h`` rounds of Bellman-Ford from ``source``.

    ``rounds[k]`` maps every vertex whose value improved in round ``k`` to the
    predecessor that produced the improvement.
    """

    source: int
    h: int
    dist: list
    rounds: list[dict[int, int]]

    def lex(self, t: int) -> LexWeight:
        return LexWeight.from_key(self.dist[t])

    def path(self, t: int) -> list[int]:
        """One optimal walk of at most ``h`` hops; simple unless it closes a negative cycle."""
        if self.dist[t] == INF:
            raise KeyError(t)
        seq = [t]
        x, k = t, self.h
        while k > 0:
            while k > 0 and x not in self.rounds[k]:
                k -= 1
            if k == 0:
                break
            x = self.rounds[k][x]
            seq.append(x)
            k -= 1
        seq.reverse()
        return seq


def hop_bounded_bellman_ford(
    g: DynamicGraph, source: int, h: int, forbidden=(), stats: dict | None = None
) -> HopBoundedTable:
    """Exact ``<= h``-hop lexicographic distances in ``g - forbidden``.

    Works with negative weights and negative cycles; round ``k`` only relaxes
    out-edges of vertices that changed in round ``k - 1``.
    """
    if h < 1:
        raise ValueError("hop bound must be at least 1")
    n = g.n
    mask = _mask(n, forbidden)
    prev: list = [INF] * n
    prev[source] = 0
    rounds: list[dict[int, int]] = [{}]
    if mask[source]:
        return HopBoundedTable(source, h, prev, rounds + [{} for _ in range(h)])
    changed = [source]
    out = g.out_adj
    relaxed = 0
    for _ in range(h):
        cur = prev[:]
        par: dict[int, int] = {}
        for u in changed:
            du = prev[u]
            for v, w in out[u].items():
                if mask[v]:
                    continue
                relaxed += 1
                cand = du + w * HOP_BASE + 1
                if cand < cur[v]:
                    cur[v] = cand
                    par[v] = u
        rounds.append(par)
        prev = cur
        changed = sorted(par)
    while len(rounds) <= h:
        rounds.append({})
    if stats is not None:
        stats["edges_relaxed"] = stats.get("edges_relaxed", 0) + relaxed
    return HopBoundedTable(source, h, prev, rounds)


def feasible_price_function(g: DynamicGraph) -> PriceFunction:
    """Bellman-Ford from a virtual source joined to every vertex by a 0-edge.

    Returns potentials ``p`` with ``w(uv) + p(u) - p(v) >= 0`` or, if none
    exist, a negative cycle as a closed vertex sequence ``[c0, ..., ck, c0]``.
    """
    n = g.n
    out = g.out_adj
    p = [0] * n
    rounds: list[dict[int, int]] = []
    changed = list(range(n))
    for _ in range(n):
        if not changed:
            return PriceFunction(p)
        nxt = p[:]
        par: dict[int, int] = {}
        for u in changed:
            pu = p[u]
            for v, w in out[u].items():
                if pu + w < nxt[v]:
                    nxt[v] = pu + w
                    par[v] = u
        rounds.append(par)
        p = nxt
        changed = sorted(par)
    if not changed:
        return PriceFunction(p)
    # an n-edge optimal walk cannot be shortened, so its first repeated
    # vertex closes a negative cycle
    walk = [changed[0]]
    x, k = changed[0], n
    while k > 0:
        while k > 0 and x not in rounds[k - 1]:
            k -= 1
        if k == 0:
            break
        x = rounds[k - 1][x]
        walk.append(x)
        k -= 1
    walk.reverse()
    seen: dict[int, int] = {}
    for i, x in enumerate(walk):
        if x in seen:
            return PriceFunction(None, walk[seen[x]: i + 1])
        seen[x] = i
    raise AssertionError("negative cycle witness not found")


def walk_length(g: DynamicGraph, walk: Sequence[int]) -> LexWeight:
    """Lexicographic length of a vertex sequence; raises ``KeyError`` on a missing edge."""
    total = 0
    for a, b in zip(walk, walk[1:]):
        total += g.out_adj[a][b]
    return LexWeight(total, len(walk) - 1)
