"""Dynamic reachability on DAGs through path counts modulo a prime.

For an acyclic graph ``(I - A)^-1 = I + A + A^2 + ...`` counts paths, so
``t`` is reachable from ``s`` exactly when that entry is non-zero over the
integers, and with high probability when it is non-zero mod a random prime.

The inverse is recomputed in ``O(nm)`` at the start of each phase.  Inside a
phase every edge change is a single-entry change of ``I - A`` and the current
inverse is kept implicitly through the Woodbury identity:

    inv(M + U V^T) = inv(M) - inv(M) U inv(I + V^T inv(M) U) V^T inv(M)

where the small matrix in the middle (the capacitance) is at most ``t x t``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np
import sympy

from .errors import MalformedUpdateError, NotADagError
from .graph import DynamicGraph

DEFAULT_PRIME = (1 << 31) - 1
# below this every product of two residues fits a signed 64-bit integer
_INT64_SAFE = 1 << 31


@dataclass(frozen=True)
class PrimeField:
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if self.p < 2 or not sympy.isprime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def random(cls, seed, lo: int = 1 << 30, hi: int = 1 << 31) -> "PrimeField":
        """Prime drawn uniformly-ish from ``[lo, hi)`` by trial candidates."""
        rng = random.Random(seed)
        while True:
            cand = rng.randrange(lo, hi) | 1
            if cand < hi and sympy.isprime(cand):
                return cls(cand)

    @property
    def dtype(self):
        return np.int64 if self.p < _INT64_SAFE else object

    def inv(self, x: int) -> int:
        return pow(x % self.p, -1, self.p)


def topological_order(g: DynamicGraph) -> list[int]:
    indeg = [len(g.in_adj[v]) for v in range(g.n)]
    order = [v for v in range(g.n) if indeg[v] == 0]
    i = 0
    while i < len(order):
        for v in g.out_adj[order[i]]:
            indeg[v] -= 1
            if indeg[v] == 0:
                order.append(v)
        i += 1
    if len(order) != g.n:
        raise NotADagError("graph has a cycle")
    return order


def dag_path_counts(g: DynamicGraph, field: PrimeField | None = None) -> np.ndarray:
    """Matrix of ``u -> v`` path counts mod p, the empty path included.

    Rows are filled in reverse topological order: the paths leaving ``u`` are
    the empty one plus those through each out-neighbour.
    """
    field = field or PrimeField()
    p = field.p
    n = g.n
    order = topological_order(g)
    M = np.zeros((n, n), dtype=field.dtype)
    for u in reversed(order):
        row = np.zeros(n, dtype=field.dtype)
        row[u] = 1
        for v in g.out_adj[u]:
            row += M[v]
        M[u] = row % p
    return M


@dataclass
class InversePhase:
    """Exact inverse at phase start plus the pending single-entry changes.

    ``entries`` lists ``(i, j, delta)`` changes of ``I - A`` in first-seen
    order, merged per position.  ``W[:, b] = delta_b * M0inv[:, i_b]``,
    ``Zr[a, :] = M0inv[j_a, :]`` and ``capinv`` inverts
    ``I + Zr[:, i] * delta``.
    """

    field: PrimeField
    M0inv: np.ndarray
    t: int
    entries: list[tuple[int, int, int]] = field(default_factory=list)
    W: list[np.ndarray] = field(default_factory=list)
    Zr: list[np.ndarray] = field(default_factory=list)
    capinv: list[list[int]] = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.entries)

    def _cap_entry(self, a: int, b: int) -> int:
        _, ja, _ = self.entries[a]
        ib, _, db = self.entries[b]
        return ((a == b) + db * int(self.M0inv[ja, ib])) % self.field.p

    def _border(self) -> bool:
        """Extend ``capinv`` by the newest entry; False if the pivot vanishes."""
        p = self.field.p
        k = len(self.capinv)
        X = self.capinv
        b = [self._cap_entry(a, k) for a in range(k)]
        c = [self._cap_entry(k, a) for a in range(k)]
        d = self._cap_entry(k, k)
        xb = [sum(X[r][q] * b[q] for q in range(k)) % p for r in range(k)]
        cx = [sum(c[q] * X[q][r] for q in range(k)) % p for r in range(k)]
        s = (d - sum(c[q] * xb[q] for q in range(k))) % p
        if s == 0:
            return False
        si = pow(s, -1, p)
        new = [[(X[r][q] + xb[r] * cx[q] * si) % p for q in range(k)] + [(-xb[r] * si) % p] for r in range(k)]
        new.append([(-cx[q] * si) % p for q in range(k)] + [si])
        self.capinv = new
        return True

    def _rebuild_cap(self) -> bool:
        self.capinv = []
        for kk in range(len(self.entries)):
            saved = self.entries
            self.entries = saved[: kk + 1]
            ok = self._border()
            self.entries = saved
            if not ok:
                return False
        return True

    def push(self, i: int, j: int, delta: int) -> bool:
        """Record ``(I - A)[i, j] += delta``.  False means the phase must restart."""
        p = self.field.p
        for idx, (a, b, d) in enumerate(self.entries):
            if (a, b) == (i, j):
                nd = d + delta
                if nd == 0:
                    del self.entries[idx]
                    del self.W[idx]
                    del self.Zr[idx]
                else:
                    self.entries[idx] = (i, j, nd)
                    self.W[idx] = (nd * self.M0inv[:, i]) % p
                return self._rebuild_cap()
        self.entries.append((i, j, delta))
        self.W.append((delta * self.M0inv[:, i]) % p)
        self.Zr.append(self.M0inv[j, :].copy())
        return self._border()

    def entry(self, s: int, t: int) -> int:
        """Entry ``(s, t)`` of the current inverse, in ``O(k^2)``."""
        p = self.field.p
        val = int(self.M0inv[s, t])
        k = self.k
        if k:
            w = [int(self.W[b][s]) for b in range(k)]
            z = [int(self.Zr[a][t]) for a in range(k)]
            X = self.capinv
            corr = sum(w[b] * sum(X[b][a] * z[a] for a in range(k)) for b in range(k))
            val -= corr
        return val % p


def begin_phase(g: DynamicGraph, field: PrimeField, t: int) -> InversePhase:
    return InversePhase(field, dag_path_counts(g, field), t)


class DagReach:
    """Reachability under single-edge insertions and deletions of a DAG.

    Inserts that would close a cycle are rejected.  A phase restarts once
    ``t`` distinct matrix entries have changed.
    """

    def __init__(self, g: DynamicGraph, t: int = 4, field: PrimeField | None = None):
        if t < 1:
            raise ValueError("phase length must be at least 1")
        self.g = g.copy()
        self.t = t
        self.field = field or PrimeField()
        self.phases = 0
        self._restart()

    def _restart(self) -> None:
        self.phase = begin_phase(self.g, self.field, self.t)
        self.phases += 1

    def _reaches(self, s: int, t: int) -> bool:
        seen = bytearray(self.g.n)
        stack = [s]
        seen[s] = 1
        while stack:
            u = stack.pop()
            if u == t:
                return True
            for v in self.g.out_adj[u]:
                if not seen[v]:
                    seen[v] = 1
                    stack.append(v)
        return False

    def insert(self, i: int, j: int) -> None:
        self._check(i, j)
        if self.g.has_edge(i, j):
            raise MalformedUpdateError(f"edge {i}->{j} already present")
        if i == j or self._reaches(j, i):
            raise NotADagError(f"inserting {i}->{j} closes a cycle")
        self.g.add_edge(i, j)
        self._apply(i, j, -1)

    def delete(self, i: int, j: int) -> None:
        self._check(i, j)
        if not self.g.has_edge(i, j):
            raise MalformedUpdateError(f"edge {i}->{j} not present")
        self.g.remove_edge(i, j)
        self._apply(i, j, 1)

    def edge_update(self, op: str, i: int, j: int) -> None:
        if op == "insert":
            self.insert(i, j)
        elif op == "delete":
            self.delete(i, j)
        else:
            raise ValueError(f"unknown edge op {op!r}")

    def _apply(self, i: int, j: int, delta: int) -> None:
        ok = self.phase.push(i, j, delta)
        if not ok or self.phase.k >= self.t:
            self._restart()

    def _check(self, *vs: int) -> None:
        for v in vs:
            if not 0 <= v < self.g.n:
                raise MalformedUpdateError(f"vertex {v} out of range")

    def entry(self, s: int, t: int) -> int:
        return self.phase.entry(s, t)

    def reach_query(self, s: int, t: int) -> bool:
        self._check(s, t)
        return self.phase.entry(s, t) != 0
