"""Hitting sets: random sampling, greedy over explicit sets, and tree root paths."""
from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import HittingSetPreconditionError, InvariantError
from .pathtree import INF, HeavyPathDecomposition, WeightedPathTree


def random_hitting_set(n: int, h: int, c: int = 1, seed=None) -> list[int]:
    """Sample ``ceil(c * (n/h) * ln n)`` vertices with replacement; sorted, deduplicated."""
    if n <= 0:
        return []
    if n == 1:
        return [0]
    if c < 1:
        raise ValueError("c must be at least 1")
    h = min(max(h, 2), n)
    rng = random.Random(seed)
    count = max(1, math.ceil(c * (n / h) * math.log(n)))
    return sorted({rng.randrange(n) for _ in range(count)})


def greedy_bound(n: int, k: int, num_sets: int) -> int:
    return math.ceil((n / k) * math.log(max(num_sets, 2))) + 1


def greedy_hitting_set(sets: Sequence[Iterable[int]], k: int, n: int | None = None) -> list[int]:
    """Repeatedly take the element contained in the most sets not yet hit.

    Every set must have at least ``k`` distinct elements.  Returns elements in
    pick order; ties go to the smallest element.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    family = [sorted(set(s)) for s in sets]
    for idx, s in enumerate(family):
        if len(s) < k:
            raise HittingSetPreconditionError(f"set #{idx} has {len(s)} < k={k} elements")
    containing: dict[int, list[int]] = {}
    for idx, s in enumerate(family):
        for x in s:
            containing.setdefault(x, []).append(idx)
    count = {x: len(ids) for x, ids in containing.items()}
    heap = [(-c, x) for x, c in count.items()]
    heapq.heapify(heap)
    hit = bytearray(len(family))
    remaining = len(family)
    picked: list[int] = []
    while remaining:
        negc, x = heapq.heappop(heap)
        if -negc != count[x] or count[x] == 0:
            continue
        picked.append(x)
        for idx in containing[x]:
            if hit[idx]:
                continue
            hit[idx] = 1
            remaining -= 1
            for y in family[idx]:
                count[y] -= 1
                if count[y] and y != x:
                    heapq.heappush(heap, (-count[y], y))
        count[x] = 0
    return picked


@dataclass
class RootedTree:
    """Tree over ground-set vertices; ``parent`` uses local indices, -1 at the root."""

    vertices: list[int]
    parent: list[int]

    def __len__(self) -> int:
        return len(self.vertices)

    @classmethod
    def from_parent_map(cls, root: int, parent_of: dict[int, int]) -> "RootedTree":
        """Build from ``{child: parent}`` ground-vertex pairs rooted at ``root``."""
        verts = [root] + sorted(v for v in parent_of if v != root)
        local = {v: i for i, v in enumerate(verts)}
        par = [-1] + [local[parent_of[v]] for v in verts[1:]]
        return cls(verts, par)

    def depths(self) -> list[int]:
        n = len(self.vertices)
        depth = [-1] * n
        for v in range(n):
            chain = []
            x = v
            while x >= 0 and depth[x] < 0:
                chain.append(x)
                x = self.parent[x]
            base = depth[x] if x >= 0 else -1
            for y in reversed(chain):
                base += 1
                depth[y] = base
        return depth

    def root_paths(self, k: int) -> list[list[int]]:
        """Ground-vertex sequences of all root paths ending at depth ``k``."""
        depth = self.depths()
        out = []
        for v in range(len(self.vertices)):
            if depth[v] == k:
                seq = []
                x = v
                while x >= 0:
                    seq.append(self.vertices[x])
                    x = self.parent[x]
                out.append(seq[::-1])
        return out


def prune_to_depth(tree: RootedTree, k: int) -> RootedTree:
    """Drop every vertex that has no descendant (inclusive) at depth exactly ``k``."""
    n = len(tree.vertices)
    if n == 0:
        return RootedTree([], [])
    depth = tree.depths()
    keep = bytearray(n)
    for v in range(n):
        if depth[v] == k:
            x = v
            while x >= 0 and not keep[x]:
                keep[x] = 1
                x = tree.parent[x]
    kept = [v for v in range(n) if keep[v]]
    local = {v: i for i, v in enumerate(kept)}
    return RootedTree(
        [tree.vertices[v] for v in kept],
        [local[tree.parent[v]] if tree.parent[v] >= 0 else -1 for v in kept],
    )


def tree_bound(n: int, k: int, leaves: int) -> int:
    return math.ceil((2 * n / (k + 1)) * (math.log(max(leaves, 2)) + 1)) + 1


@dataclass
class _TreeState:
    tree: RootedTree
    hld: HeavyPathDecomposition
    levels: list[WeightedPathTree]
    level_of: list[int]
    leaf: bytearray
    visited: bytearray
    children: list[list[int]] = field(default_factory=list)


def _floor_log2(x: int) -> int:
    return x.bit_length() - 1


def tree_hitting_set(
    trees: Sequence[RootedTree], k: int, n: int | None = None, check: bool = False
) -> list[int]:
    """Hit every ``k``-hop root path of every tree with few vertices.

    Approximate greedy: each vertex ``v`` carries a counter ``c_v`` with
    ``D_v >= c_v > D_v / 2``, where ``D_v`` counts unhit root paths through
    ``v``, and the vertex with the largest counter is taken next.  Per tree,
    ``levels[i]`` holds the exact count of unhit paths below each vertex whose
    count is still at least ``2**i`` and infinity for the rest, which is what
    the counters are rounded against.

    ``k = 0`` asks to hit every tree root.  With ``check=True`` the counter
    sandwich, progress per pick and level contents are recomputed by brute
    force on every pick (small inputs only).
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    states: list[_TreeState] = []
    counter: dict[int, int] = {}
    where: dict[int, list[tuple[int, int]]] = {}
    unhit = 0
    ground = set()
    for tree in trees:
        ground.update(tree.vertices)
        pruned = prune_to_depth(tree, k)
        size = len(pruned.vertices)
        if size == 0:
            continue
        hld = HeavyPathDecomposition(pruned.parent)
        below = [0] * size
        leaf = bytearray(size)
        for v in range(size):
            if not hld.children[v]:
                leaf[v] = 1
        # reverse of a heavy-first preorder lists children before parents
        for p in range(size - 1, -1, -1):
            v = hld.at[p]
            if leaf[v]:
                below[v] = 1
            if pruned.parent[v] >= 0:
                below[pruned.parent[v]] += below[v]
        top = _floor_log2(below[hld.root])
        levels = [
            WeightedPathTree(hld, [b if b >= (1 << i) else INF for b in below]) for i in range(top + 1)
        ]
        level_of = [_floor_log2(b) for b in below]
        t_idx = len(states)
        states.append(_TreeState(pruned, hld, levels, level_of, leaf, bytearray(size), hld.children))
        for v in range(size):
            x = pruned.vertices[v]
            counter[x] = counter.get(x, 0) + (1 << level_of[v])
            where.setdefault(x, []).append((t_idx, v))
        unhit += below[hld.root]

    if n is None:
        n = max(ground, default=-1) + 1
    heap = [(-c, x) for x, c in counter.items()]
    heapq.heapify(heap)
    picked: list[int] = []
    chosen = set()

    while unhit > 0:
        negc, z = heapq.heappop(heap)
        if z in chosen or counter[z] != -negc:
            continue
        if check:
            _check_pick(states, counter, z, unhit, k, n - len(picked))
        picked.append(z)
        chosen.add(z)
        touched: dict[int, int] = {}
        for t_idx, node in where.get(z, ()):
            st = states[t_idx]
            if st.visited[node]:
                continue
            newly = 0
            stack = [node]
            while stack:
                x = stack.pop()
                if st.visited[x]:
                    continue
                st.visited[x] = 1
                if st.leaf[x]:
                    newly += 1
                old = st.level_of[x]
                if old >= 0:
                    st.level_of[x] = -1
                    gx = st.tree.vertices[x]
                    touched[gx] = touched.get(gx, 0) - (1 << old)
                stack.extend(st.children[x])
            if newly == 0:
                continue
            unhit -= newly
            par = st.tree.parent[node]
            for i, wpt in enumerate(st.levels):
                wpt.add_subtree(node, INF)
                if par >= 0:
                    wpt.add_root_path(par, -newly)
                threshold = 1 << i
                while True:
                    val, x = wpt.min()
                    if val >= threshold:
                        break
                    wpt.reset(x)
                    old = st.level_of[x]
                    if old >= i:
                        st.level_of[x] = i - 1
                        gx = st.tree.vertices[x]
                        gain = (1 << (i - 1)) if i > 0 else 0
                        touched[gx] = touched.get(gx, 0) - (1 << old) + gain
        for x, delta in touched.items():
            if delta:
                counter[x] += delta
                if x not in chosen:
                    heapq.heappush(heap, (-counter[x], x))
        if check:
            _check_levels(states)
    return picked


def _exact_counts(states: list[_TreeState]) -> tuple[dict[int, int], list[list[int]]]:
    total: dict[int, int] = {}
    per_tree = []
    for st in states:
        size = len(st.tree.vertices)
        d = [0] * size
        for v in range(size):
            if st.leaf[v] and not st.visited[v]:
                x = v
                while x >= 0:
                    d[x] += 1
                    x = st.tree.parent[x]
        per_tree.append(d)
        for v in range(size):
            g = st.tree.vertices[v]
            total[g] = total.get(g, 0) + d[v]
    return total, per_tree


def _check_pick(states, counter, z, unhit, k, n_left) -> None:
    exact, _ = _exact_counts(states)
    for x, dx in exact.items():
        cx = counter.get(x, 0)
        if not (dx >= cx and (2 * cx > dx or dx == 0)):
            raise InvariantError(f"counter sandwich broken at {x}: D={dx}, c={cx}")
    if 2 * exact.get(z, 0) * n_left < unhit * (k + 1):
        raise InvariantError(f"pick {z} hits {exact.get(z, 0)} of {unhit} paths; progress bound violated")


def _check_levels(states) -> None:
    _, per_tree = _exact_counts(states)
    for st, d in zip(states, per_tree):
        for i, wpt in enumerate(st.levels):
            for v in range(len(d)):
                want = d[v] if d[v] >= (1 << i) else INF
                if wpt.weight(v) != want:
                    raise InvariantError(f"level {i} holds {wpt.weight(v)} at node {v}, expected {want}")
        for v in range(len(d)):
            if st.level_of[v] != _floor_log2(d[v]):
                raise InvariantError(f"node {v} sits in level {st.level_of[v]} with count {d[v]}")


def covers_all(hitting: Iterable[int], paths: Iterable[Iterable[int]]) -> bool:
    """Shared coverage predicate: every path/set contains a chosen vertex."""
    chosen = set(hitting)
    return all(any(x in chosen for x in p) for p in paths)
