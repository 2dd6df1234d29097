"""Static rooted trees with root-path additive weights and a global minimum.

The tree never changes shape, so a heavy-path decomposition turns every
root-to-vertex path into O(log n) contiguous ranges and every subtree into
one range.  A bottom-up segment tree with non-propagated lazy adds serves
range add and global argmin in O(log n) per range.
"""
from __future__ import annotations

import math
from typing import Sequence

INF = math.inf


class HeavyPathDecomposition:
    """Heavy-first DFS layout of a tree given by a parent array (root has -1)."""

    def __init__(self, parent: Sequence[int]):
        n = len(parent)
        self.n = n
        self.parent = list(parent)
        children: list[list[int]] = [[] for _ in range(n)]
        root = -1
        for v, p in enumerate(parent):
            if p < 0:
                if root >= 0:
                    raise ValueError("tree has more than one root")
                root = v
            else:
                children[p].append(v)
        if n and root < 0:
            raise ValueError("tree has no root")
        self.root = root
        self.children = children

        order = []
        if n:
            stack = [root]
            while stack:
                v = stack.pop()
                order.append(v)
                stack.extend(children[v])
        if len(order) != n:
            raise ValueError("parent array is not a single tree")
        size = [1] * n
        depth = [0] * n
        for v in order:
            if parent[v] >= 0:
                depth[v] = depth[parent[v]] + 1
        for v in reversed(order):
            if parent[v] >= 0:
                size[parent[v]] += size[v]
        self.size = size
        self.depth = depth

        head = [0] * n
        pos = [0] * n
        nxt = 0
        if n:
            stack = [(root, root)]
            while stack:
                v, h = stack.pop()
                head[v] = h
                pos[v] = nxt
                nxt += 1
                kids = children[v]
                if not kids:
                    continue
                heavy = max(kids, key=lambda c: size[c])
                # light children first on the stack so the heavy child is
                # visited next and its chain stays contiguous
                for c in kids:
                    if c != heavy:
                        stack.append((c, c))
                stack.append((heavy, h))
        self.head = head
        self.pos = pos
        self.at = [0] * n
        for v in range(n):
            self.at[pos[v]] = v

    def root_path_ranges(self, v: int) -> list[tuple[int, int]]:
        """Half-open position ranges covering the path from the root to ``v``."""
        out = []
        head, pos, parent = self.head, self.pos, self.parent
        while v >= 0:
            h = head[v]
            out.append((pos[h], pos[v] + 1))
            v = parent[h]
        return out

    def subtree_range(self, v: int) -> tuple[int, int]:
        return self.pos[v], self.pos[v] + self.size[v]


class _MinAddSegmentTree:
    def __init__(self, values: Sequence):
        n = len(values)
        size = 1
        while size < max(n, 1):
            size <<= 1
        self.size = size
        t = [INF] * (2 * size)
        t[size:size + n] = values
        for i in range(size - 1, 0, -1):
            t[i] = min(t[2 * i], t[2 * i + 1])
        self.t = t
        self.d = [0] * size

    def _apply(self, i: int, val) -> None:
        self.t[i] += val
        if i < self.size:
            self.d[i] += val

    def _pull(self, i: int) -> None:
        t, d = self.t, self.d
        while i > 1:
            i >>= 1
            a, b = t[2 * i], t[2 * i + 1]
            t[i] = (a if a < b else b) + d[i]

    def add(self, lo: int, hi: int, val) -> None:
        if lo >= hi:
            return
        size = self.size
        lo += size
        hi += size
        l0, r0 = lo, hi - 1
        while lo < hi:
            if lo & 1:
                self._apply(lo, val)
                lo += 1
            if hi & 1:
                hi -= 1
                self._apply(hi, val)
            lo >>= 1
            hi >>= 1
        self._pull(l0)
        self._pull(r0)

    def argmin(self) -> tuple[float, int]:
        t, d, size = self.t, self.d, self.size
        best = t[1]
        if best == INF:
            return INF, -1
        i, target = 1, best
        while i < size:
            target -= d[i]
            i = 2 * i if t[2 * i] == target else 2 * i + 1
        return best, i - size

    def value(self, p: int):
        i = p + self.size
        val = self.t[i]
        i >>= 1
        while i:
            val += self.d[i]
            i >>= 1
        return val


class WeightedPathTree:
    """Vertex weights on a static tree with path-add, subtree-add and argmin.

    ``weights[v]`` is the initial weight of local vertex ``v``; ``math.inf``
    marks a vertex that is switched off.  Adding ``math.inf`` switches a whole
    range off for good since later finite adds keep it infinite.
    """

    def __init__(self, hld: HeavyPathDecomposition, weights: Sequence):
        self.hld = hld
        self._seg = _MinAddSegmentTree([weights[v] for v in hld.at])

    def add_root_path(self, v: int, delta) -> None:
        for lo, hi in self.hld.root_path_ranges(v):
            self._seg.add(lo, hi, delta)

    def add_subtree(self, v: int, delta) -> None:
        lo, hi = self.hld.subtree_range(v)
        self._seg.add(lo, hi, delta)

    def reset(self, v: int) -> None:
        p = self.hld.pos[v]
        self._seg.add(p, p + 1, INF)

    def min(self) -> tuple[float, int]:
        """``(weight, vertex)`` of a minimum-weight vertex; vertex is -1 if all are off."""
        val, p = self._seg.argmin()
        return val, (self.hld.at[p] if p >= 0 else -1)

    def weight(self, v: int):
        return self._seg.value(self.hld.pos[v])
