"""Start-of-phase preprocessing: the path collection, congestion and ``H0``."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ModeError, ParameterError
from .graph import HOP_BASE, INF, DynamicGraph, LexWeight, bfs_tree, hop_bounded_bellman_ford
from .hitting import greedy_hitting_set


@dataclass(frozen=True)
class PathRecord:
    s: int
    t: int
    key: int
    vertices: tuple[int, ...]
    negative: bool = False

    @property
    def length(self) -> LexWeight:
        return LexWeight.from_key(self.key)

    @property
    def hops(self) -> int:
        return len(self.vertices) - 1


@dataclass
class PathCollection:
    """At most one stored path per ordered pair plus the per-vertex index.

    ``members[v]`` lists the pairs whose path visits ``v`` and ``alpha[v]`` sums
    ``deg[t]`` over those pairs, where ``deg`` is the in-degree in the
    preprocessed graph.
    """

    n: int
    paths: dict[tuple[int, int], PathRecord] = field(default_factory=dict)
    members: list[list[tuple[int, int]]] = field(default_factory=list)
    alpha: list[int] = field(default_factory=list)
    deg: list[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.members:
            self.members = [[] for _ in range(self.n)]
        if not self.alpha:
            self.alpha = [0] * self.n

    def add(self, rec: PathRecord) -> None:
        self.paths[(rec.s, rec.t)] = rec
        w = self.deg[rec.t]
        for v in set(rec.vertices):
            self.members[v].append((rec.s, rec.t))
            self.alpha[v] += w

    def get(self, s: int, t: int) -> PathRecord | None:
        return self.paths.get((s, t))

    def key(self, s: int, t: int):
        rec = self.paths.get((s, t))
        return INF if rec is None else rec.key

    def __len__(self) -> int:
        return len(self.paths)


def build_phase(
    g0: DynamicGraph,
    h: int,
    tau: int,
    exclude=(),
    unweighted: bool = False,
    stats: dict | None = None,
) -> tuple[PathCollection, set[int]]:
    """Shortest ``<= h``-hop paths from every source with congestion control.

    Sources are processed in ascending order; before each one, every vertex
    whose congestion exceeds ``tau / 2`` joins the congested set ``C`` and the
    source's paths are then computed in ``g0 - (C | exclude)``.  Afterwards
    ``delta^h_{g0}(s,t) <= len(pi_st) <= delta^h_{g0 - C}(s,t)`` for all pairs and
    no vertex has congestion above ``tau``.
    """
    n = g0.n
    excluded = set(exclude)
    m = sum(1 for u, v, _ in g0.edges() if u not in excluded and v not in excluded)
    if tau < 2 * m:
        raise ParameterError(f"tau={tau} must be at least 2m={2 * m}")
    if n and not 1 <= h <= n:
        raise ParameterError(f"h={h} outside [1, {n}]")
    if unweighted and not g0.is_unweighted:
        raise ModeError("unweighted preprocessing on a weighted graph")
    deg = [0 if v in excluded else sum(1 for u in g0.in_adj[v] if u not in excluded) for v in range(n)]
    pi = PathCollection(n, deg=deg)
    congested: set[int] = set()
    half = tau / 2
    for s in range(n):
        for v in range(n):
            if v not in congested and pi.alpha[v] > half:
                congested.add(v)
        forbidden = bytearray(n)
        for v in congested:
            forbidden[v] = 1
        for v in excluded:
            forbidden[v] = 1
        if forbidden[s]:
            pi.add(PathRecord(s, s, 0, (s,)))
            continue
        if unweighted:
            tree = bfs_tree(g0, s, forbidden=forbidden)
            limit = h * HOP_BASE + h
            for t in range(n):
                if tree.dist[t] <= limit:
                    pi.add(PathRecord(s, t, tree.dist[t], tuple(tree.path(t))))
        else:
            table = hop_bounded_bellman_ford(g0, s, h, forbidden, stats=stats)
            for t in range(n):
                if table.dist[t] != INF:
                    walk = tuple(table.path(t))
                    pi.add(PathRecord(s, t, table.dist[t], walk, len(set(walk)) < len(walk)))
    return pi, congested


def build_h0(pi: PathCollection, h: int) -> list[int]:
    """Greedy hitting set of every stored simple path with at least ``ceil(h/2)`` vertices.

    Single-vertex paths ``pi_ss`` are skipped; no query path ever needs them hit.
    """
    r = math.ceil(h / 2)
    family = [
        rec.vertices
        for (s, t), rec in sorted(pi.paths.items())
        if s != t and not rec.negative and len(rec.vertices) >= r
    ]
    return greedy_hitting_set(family, max(r, 1), pi.n)


def degree_split(g0: DynamicGraph, delta: int) -> list[int]:
    """The ``delta`` vertices of largest total degree, ties to smaller ids."""
    order = sorted(range(g0.n), key=lambda v: (-g0.degree(v), v))
    return sorted(order[: max(0, min(delta, g0.n))])
