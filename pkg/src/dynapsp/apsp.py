"""Fully dynamic exact all-pairs shortest paths under vertex updates.

The structure works in phases.  A phase starts by computing short-hop paths
``pi[s, t]`` from every source while steering around congested vertices
``C``.  Each vertex update adds its vertex to the affected set ``D`` and then

* grows exact shortest-path trees from and to every vertex of ``C | D``,
* repairs the stored paths that run through ``D`` with one small Dijkstra
  per source over raw edges and shortcut edges standing for intact paths,
* picks a hitting set ``H`` of the long repaired paths and grows trees from
  and to ``H`` in ``G - (C | D)``.

A distance query is the minimum of three candidates: through ``C | D``,
through ``H``, or the stored/repaired path itself.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    InvariantError,
    ModeError,
    NoPathError,
    ParameterError,
    QueryForbiddenError,
)
from .graph import (
    FORWARD,
    HOP_BASE,
    INF,
    LEX_ZERO,
    REVERSE,
    DynamicGraph,
    LexWeight,
    ShortestPathTree,
    dijkstra_many,
    feasible_price_function,
)
from .hitting import RootedTree, random_hitting_set, tree_hitting_set
from .preprocess import PathCollection, build_h0, build_phase, degree_split

DETERMINISTIC = "det"
RANDOMIZED = "rand"


@dataclass
class Params:
    """Tuning knobs; ``None`` picks the balanced default for the current graph."""

    h: int | None = None
    delta: int | None = None
    tau: int | None = None
    mode: str = DETERMINISTIC
    unweighted: bool = False
    degree_split: bool = False
    rand_c: int = 3
    seed: int = 0

    def resolve(self, n: int, m0: int) -> tuple[int, int, int]:
        if self.unweighted:
            base = max(2, round(n ** 0.25))
            h = self.h if self.h is not None else base
            delta = self.delta if self.delta is not None else base
            auto_tau = max(2 * m0, m0 * round(n ** 0.5))
        else:
            h = self.h if self.h is not None else max(2, round(n ** 0.2))
            delta = self.delta if self.delta is not None else h * h
            auto_tau = max(2 * m0, m0 * round(n ** 0.4))
        if n >= 1:
            h = min(h, n)
        tau = auto_tau if self.tau is None else max(self.tau, 2 * m0)
        return h, delta, tau


@dataclass
class RebuildTree:
    """Dijkstra tree from ``source`` over raw edges of ``G - D`` and shortcuts.

    A vertex in ``compressed`` hangs off the root by a shortcut that stands for
    the stored path ``pi[source, v]``; every other tree edge is a graph edge.
    ``dist`` holds true packed lengths.
    """

    source: int
    targets: frozenset
    dist: dict[int, int] = field(default_factory=dict)
    parent: dict[int, int] = field(default_factory=dict)
    compressed: set[int] = field(default_factory=set)

    def key(self, t: int):
        return self.dist.get(t, INF)

    def children(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for v, p in self.parent.items():
            out.setdefault(p, []).append(v)
        for kids in out.values():
            kids.sort()
        return out

    def path(self, t: int, pi: PathCollection) -> list[int]:
        if t not in self.dist:
            raise NoPathError(f"{t} not reached from {self.source}")
        seq = [t]
        x = t
        while x != self.source:
            if x in self.compressed:
                seq.extend(reversed(pi.get(self.source, x).vertices[:-1]))
                break
            x = self.parent[x]
            seq.append(x)
        seq.reverse()
        return seq


def rebuild_short_paths(
    g: DynamicGraph,
    pi: PathCollection,
    affected: bytearray,
    prices: Sequence[int],
    s: int,
    targets,
    stats: dict | None = None,
) -> RebuildTree:
    """Replacement paths in ``G - D`` for the targets whose stored path met ``D``.

    For each target ``t`` and each edge ``vt`` of ``G - D`` the auxiliary graph
    gets that edge, plus a shortcut ``s -> v`` weighted by ``pi[s, v]`` when the
    latter avoids ``D``.  Every repaired length is then at least the distance
    in ``G - D`` and at most the ``h``-hop distance in ``G - (C | D)``.
    """
    targets = frozenset(targets)
    tree = RebuildTree(s, targets)
    raw: dict[int, list[tuple[int, int]]] = {}
    shortcut: dict[int, int] = {}
    ps = prices[s]
    y_edges = 0
    for t in sorted(targets):
        if affected[t] or t == s:
            continue
        pt = prices[t]
        for v, w in g.in_adj[t].items():
            if affected[v]:
                continue
            raw.setdefault(v, []).append((t, (w + prices[v] - pt) * HOP_BASE + 1))
            y_edges += 1
            if v != s and v not in targets and v not in shortcut:
                rec = pi.get(s, v)
                if rec is not None:
                    if rec.negative:
                        raise InvariantError(f"negative stored path {s}->{v} avoids D")
                    shortcut[v] = rec.key + (ps - prices[v]) * HOP_BASE
                    y_edges += 1

    dist = {s: 0}
    parent: dict[int, int] = {}
    heap = [(0, s)]
    first = [(v, r, True) for v, r in shortcut.items()]
    pops = 0
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        pops += 1
        out = [(v, r, False) for v, r in raw.get(u, ())]
        if u == s:
            out = first + out
        for v, r, via_shortcut in out:
            if r < 0:
                raise InvariantError("negative reduced weight in rebuild graph")
            nd = d + r
            dv = dist.get(v, INF)
            if nd < dv or (nd == dv and u < parent[v]):
                if nd < dv:
                    heapq.heappush(heap, (nd, v))
                dist[v] = nd
                parent[v] = u
                if via_shortcut:
                    tree.compressed.add(v)
                else:
                    tree.compressed.discard(v)
    tree.parent = parent
    tree.dist = {v: d - (ps - prices[v]) * HOP_BASE for v, d in dist.items()}
    if stats is not None:
        stats["rebuild_y_edges"] = stats.get("rebuild_y_edges", 0) + y_edges
        stats["dijkstra_pops"] = stats.get("dijkstra_pops", 0) + pops
    return tree


def subtree_family(
    rebuild: dict[int, RebuildTree], pi: PathCollection, h: int
) -> list[RootedTree]:
    """Subtrees below root children whose root edge is raw or a short shortcut."""
    r = math.ceil(h / 2)
    family = []
    for s in sorted(rebuild):
        tree = rebuild[s]
        kids = tree.children()
        for u in kids.get(s, ()):
            if u in tree.compressed and len(pi.get(s, u).vertices) >= r:
                continue
            verts = [u]
            par = [-1]
            i = 0
            while i < len(verts):
                for c in kids.get(verts[i], ()):
                    verts.append(c)
                    par.append(i)
                i += 1
            family.append(RootedTree(verts, par))
    return family


class DynamicAPSP:
    """Exact distances and shortest paths under fully dynamic vertex updates.

    Queries are refused while the graph contains a negative cycle; the first
    update that removes the last negative cycle starts a fresh phase.
    """

    def __init__(self, g: DynamicGraph, params: Params | None = None):
        self.params = params or Params()
        p = self.params
        if p.mode not in (DETERMINISTIC, RANDOMIZED):
            raise ParameterError(f"unknown mode {p.mode!r}")
        if p.unweighted and not g.is_unweighted:
            raise ModeError("unweighted mode needs every edge weight equal to 1")
        if p.h is not None and not (1 <= p.h <= max(g.n, 1)):
            raise ParameterError(f"h={p.h} outside [1, {g.n}]")
        if p.delta is not None and p.delta < 1:
            raise ParameterError("delta must be positive")
        if p.rand_c < 1:
            raise ParameterError("rand_c must be at least 1")
        self.g = g.copy()
        n = g.n
        self.n = n
        if p.tau is not None:
            excluded = set(degree_split(g, p.resolve(n, g.m)[1])) if p.degree_split else set()
            m0 = sum(1 for u, v, _ in g.edges() if u not in excluded and v not in excluded)
            if p.tau < 2 * m0:
                raise ParameterError(f"tau={p.tau} must be at least 2m={2 * m0}")
        self.poisoned = False
        self.negative_cycle: list[int] | None = None
        self.update_index = 0
        self.phase_index = -1
        self.phases: list[dict] = []
        self.last_stats: dict = {}
        self.prices: list[int] = [0] * n
        self.D: set[int] = set()
        self.C: set[int] = set()
        self.B: list[int] = []
        self.H0: list[int] = []
        self.H: list[int] = []
        self.hubs: list[int] = []
        self.rebuild: dict[int, RebuildTree] = {}
        self.fwd: dict[int, ShortestPathTree] = {}
        self.rev: dict[int, ShortestPathTree] = {}
        self.hub_fwd: dict[int, ShortestPathTree] = {}
        self.hub_rev: dict[int, ShortestPathTree] = {}
        self.update_count = 0
        pf = feasible_price_function(self.g)
        if pf.feasible:
            self.prices = pf.p
            self._start_phase(self.last_stats)
        else:
            self.poisoned = True
            self.negative_cycle = pf.negative_cycle

    # -- phase lifecycle -----------------------------------------------------
    def _start_phase(self, stats: dict) -> None:
        g = self.g
        p = self.params
        self.g0 = g.copy()
        h, delta, _ = p.resolve(g.n, g.m)
        self.B = degree_split(self.g0, delta) if p.degree_split else []
        excluded = set(self.B)
        m0 = sum(1 for u, v, _ in self.g0.edges() if u not in excluded and v not in excluded)
        h, delta, tau = p.resolve(g.n, m0)
        self.h, self.delta, self.tau = h, delta, tau
        self.pi, self.C = build_phase(self.g0, h, tau, exclude=self.B, unweighted=p.unweighted, stats=stats)
        self.H0 = build_h0(self.pi, h) if p.mode == DETERMINISTIC else []
        self.D = set(self.B)
        self.update_count = 0
        self.phase_index += 1
        self.phases.append(
            {
                "phase": self.phase_index,
                "update": self.update_index,
                "h": h,
                "delta": delta,
                "tau": tau,
                "m0": m0,
                "C": len(self.C),
                "B": len(self.B),
                "H0": len(self.H0),
                "paths": len(self.pi),
            }
        )
        stats["phase_rebuilt"] = True
        self._refresh(stats)

    def _trees(self, sources, direction, forbidden, stats):
        return dict(zip(sources, dijkstra_many(self.g, sources, direction, self.prices, forbidden, stats)))

    def _refresh(self, stats: dict) -> None:
        g, n, pi = self.g, self.n, self.pi
        cd = sorted(self.C | self.D)
        none = bytearray(n)
        self.fwd = self._trees(cd, FORWARD, none, stats)
        self.rev = self._trees(cd, REVERSE, none, stats)

        affected = bytearray(n)
        for d in self.D:
            affected[d] = 1
        targets: dict[int, set[int]] = {}
        for d in sorted(self.D):
            for s, t in pi.members[d]:
                targets.setdefault(s, set()).add(t)
        stats["qs_degree_mass"] = sum(pi.deg[t] for q in targets.values() for t in q)
        stats["alpha_D"] = sum(pi.alpha[d] for d in self.D)
        stats["D_tau"] = len(self.D) * self.tau
        self.targets = targets
        self.rebuild = {
            s: rebuild_short_paths(g, pi, affected, self.prices, s, targets[s], stats) for s in sorted(targets)
        }

        if self.params.mode == DETERMINISTIC:
            family = subtree_family(self.rebuild, pi, self.h)
            k = math.ceil(self.h / 2) - 1
            h1 = tree_hitting_set(family, k, n)
            stats["Z_size"] = sum(len(t) for t in family)
            stats["H1"] = len(h1)
            self.H = sorted(set(self.H0) | set(h1))
        else:
            self.H = random_hitting_set(n, self.h, self.params.rand_c, seed=f"{self.params.seed}:{self.update_index}")
        blocked = bytearray(n)
        for v in cd:
            blocked[v] = 1
        self.hubs = [v for v in self.H if not blocked[v]]
        self.hub_fwd = self._trees(self.hubs, FORWARD, blocked, stats)
        self.hub_rev = self._trees(self.hubs, REVERSE, blocked, stats)
        stats.update(C=len(self.C), D=len(self.D), H=len(self.H), H0=len(self.H0), hubs=len(self.hubs))

    # -- updates -------------------------------------------------------------
    def vertex_update(self, v: int, new_out: Sequence[tuple[int, int]], new_in: Sequence[tuple[int, int]]) -> dict:
        """Replace all edges around ``v`` and bring the structure up to date.

        Returns the work counters of this update.
        """
        if self.params.unweighted and any(w != 1 for _, w in list(new_out) + list(new_in)):
            raise ModeError("unweighted mode accepts only unit weights")
        changes = self.g.apply_vertex_update(v, new_out, new_in)
        self.update_index += 1
        stats: dict = {"removed": len(changes.removed), "added": len(changes.added), "phase_rebuilt": False}
        self.last_stats = stats
        pf = feasible_price_function(self.g)
        if not pf.feasible:
            self.poisoned = True
            self.negative_cycle = pf.negative_cycle
            stats["poisoned"] = True
            return stats
        self.prices = pf.p
        stats["poisoned"] = False
        if self.poisoned:
            self.poisoned = False
            self.negative_cycle = None
            self._start_phase(stats)
            return stats
        self.D.add(v)
        self.update_count += 1
        if self.update_count >= self.delta:
            self._start_phase(stats)
        else:
            self._refresh(stats)
        return stats

    # -- queries -------------------------------------------------------------
    def pi_prime_key(self, s: int, t: int):
        tree = self.rebuild.get(s)
        if tree is not None and t in tree.targets:
            return tree.key(t)
        return self.pi.key(s, t)

    def _best(self, s: int, t: int):
        if self.poisoned:
            raise QueryForbiddenError("graph contains a negative cycle")
        best, how = self.pi_prime_key(s, t), ("pi", None)
        for v, tr in self.rev.items():
            a = tr.dist[s]
            if a != INF:
                cand = a + self.fwd[v].dist[t]
                if cand < best:
                    best, how = cand, ("cd", v)
        for v in self.hubs:
            a = self.hub_rev[v].dist[s]
            if a != INF:
                cand = a + self.hub_fwd[v].dist[t]
                if cand < best:
                    best, how = cand, ("hub", v)
        return best, how

    def distance(self, s: int, t: int) -> LexWeight:
        """Exact ``(length, hops)`` of a lexicographically shortest ``s -> t`` path."""
        if s == t:
            if self.poisoned:
                raise QueryForbiddenError("graph contains a negative cycle")
            return LEX_ZERO
        return LexWeight.from_key(self._best(s, t)[0])

    def shortest_path(self, s: int, t: int) -> list[int]:
        if s == t:
            if self.poisoned:
                raise QueryForbiddenError("graph contains a negative cycle")
            return [s]
        key, (term, v) = self._best(s, t)
        if key == INF:
            raise NoPathError(f"{t} is unreachable from {s}")
        if term == "cd":
            return self.rev[v].path(s) + self.fwd[v].path(t)[1:]
        if term == "hub":
            return self.hub_rev[v].path(s) + self.hub_fwd[v].path(t)[1:]
        return self.pi_prime_path(s, t)

    def pi_prime_path(self, s: int, t: int) -> list[int]:
        """Vertex sequence of the stored or repaired path for ``(s, t)``."""
        tree = self.rebuild.get(s)
        if tree is not None and t in tree.targets:
            return tree.path(t, self.pi)
        rec = self.pi.get(s, t)
        if rec is None:
            raise NoPathError(f"no stored path {s}->{t}")
        return list(rec.vertices)
