"""Plain-text traces: parsing, formatting and random generation.

Format, one record per line, ``#`` starts a comment::

    apsp 5                      header: engine and vertex count
    edge 0 1 7                  initial edge (apsp: u v w, dag: u v)
    vset 2 1 2 3 -1 | 0 4 1 2   replace all edges of 2: out 2->3 (-1); in 0->2 (4), 1->2 (2)
    dist 0 3
    path 0 3
    ins 1 4                     dag traces only
    del 1 4
    reach 0 4

``edge`` records must precede every operation.
"""
from __future__ import annotations

import io
import random
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from ..errors import TraceParseError
from ..graph import MAX_ABS_WEIGHT

APSP = "apsp"
DAG = "dag"


@dataclass(frozen=True)
class VSet:
    v: int
    out: tuple[tuple[int, int], ...]
    inn: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Dist:
    s: int
    t: int


@dataclass(frozen=True)
class Path:
    s: int
    t: int


@dataclass(frozen=True)
class EdgeIns:
    i: int
    j: int


@dataclass(frozen=True)
class EdgeDel:
    i: int
    j: int


@dataclass(frozen=True)
class Reach:
    s: int
    t: int


APSP_OPS = (VSet, Dist, Path)
DAG_OPS = (EdgeIns, EdgeDel, Reach)
TAGS = {"vset": VSet, "dist": Dist, "path": Path, "ins": EdgeIns, "del": EdgeDel, "reach": Reach}


@dataclass
class Trace:
    engine: str | None = None
    n: int = 0
    edges: list[tuple[int, int, int]] = field(default_factory=list)
    ops: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.ops)


def _ints(tokens, lineno):
    try:
        return [int(x) for x in tokens]
    except ValueError:
        raise TraceParseError(lineno, f"expected integers, got {' '.join(tokens)!r}") from None


def parse_trace(stream: TextIO | str | Iterable[str]) -> Trace:
    """Read a trace; any problem raises ``TraceParseError`` naming the line."""
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    trace = Trace()
    seen_header = False

    def vertex(x, lineno):
        if not 0 <= x < trace.n:
            raise TraceParseError(lineno, f"vertex {x} out of range [0, {trace.n})")
        return x

    def weight(w, lineno):
        if abs(w) >= MAX_ABS_WEIGHT:
            raise TraceParseError(lineno, f"weight {w} overflows (|w| must stay below 2^62)")
        return w

    for lineno, raw in enumerate(stream, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tag, *rest = line.split()
        if not seen_header:
            if tag not in (APSP, DAG):
                raise TraceParseError(lineno, f"expected header 'apsp n' or 'dag n', got {tag!r}")
            if len(rest) != 1:
                raise TraceParseError(lineno, "header takes exactly one vertex count")
            (n,) = _ints(rest, lineno)
            if n < 0:
                raise TraceParseError(lineno, "vertex count must be non-negative")
            trace.engine, trace.n = tag, n
            seen_header = True
            continue
        if tag in (APSP, DAG):
            raise TraceParseError(lineno, "duplicate header")
        if tag == "edge":
            if trace.ops:
                raise TraceParseError(lineno, "edge records must come before operations")
            want = 3 if trace.engine == APSP else 2
            if len(rest) != want:
                raise TraceParseError(lineno, f"edge takes {want} fields, got {len(rest)}")
            vals = _ints(rest, lineno)
            u, v = vertex(vals[0], lineno), vertex(vals[1], lineno)
            w = weight(vals[2], lineno) if want == 3 else 1
            trace.edges.append((u, v, w))
            continue
        cls = TAGS.get(tag)
        if cls is None:
            raise TraceParseError(lineno, f"unknown op {tag!r}")
        allowed = APSP_OPS if trace.engine == APSP else DAG_OPS
        if cls not in allowed:
            raise TraceParseError(lineno, f"op {tag!r} is not valid in a {trace.engine} trace")
        if cls is VSet:
            trace.ops.append(_parse_vset(rest, lineno, vertex, weight))
            continue
        if len(rest) != 2:
            raise TraceParseError(lineno, f"{tag} takes 2 fields, got {len(rest)}")
        a, b = _ints(rest, lineno)
        trace.ops.append(cls(vertex(a, lineno), vertex(b, lineno)))
    return trace


def _parse_vset(rest, lineno, vertex, weight) -> VSet:
    if "|" not in rest:
        raise TraceParseError(lineno, "vset needs '|' between out- and in-lists")
    bar = rest.index("|")
    head, tail = rest[:bar], rest[bar + 1:]
    if len(head) < 3:
        raise TraceParseError(lineno, "vset needs v k_out k_in before the out-list")
    v, k_out, k_in = _ints(head[:3], lineno)
    outs = _ints(head[3:], lineno)
    ins = _ints(tail, lineno)
    if k_out < 0 or k_in < 0 or len(outs) != 2 * k_out or len(ins) != 2 * k_in:
        raise TraceParseError(
            lineno, f"vset announces {k_out} out / {k_in} in edges but lists {len(outs) / 2:g} / {len(ins) / 2:g}"
        )
    vertex(v, lineno)
    out = tuple((vertex(outs[i], lineno), weight(outs[i + 1], lineno)) for i in range(0, len(outs), 2))
    inn = tuple((vertex(ins[i], lineno), weight(ins[i + 1], lineno)) for i in range(0, len(ins), 2))
    return VSet(v, out, inn)


def format_op(op) -> str:
    if isinstance(op, VSet):
        outs = " ".join(f"{u} {w}" for u, w in op.out)
        ins = " ".join(f"{u} {w}" for u, w in op.inn)
        head = f"vset {op.v} {len(op.out)} {len(op.inn)}" + (f" {outs}" if outs else "")
        return head + " |" + (f" {ins}" if ins else "")
    tag = {Dist: "dist", Path: "path", EdgeIns: "ins", EdgeDel: "del", Reach: "reach"}[type(op)]
    a, b = (op.s, op.t) if hasattr(op, "s") else (op.i, op.j)
    return f"{tag} {a} {b}"


def format_trace(trace: Trace) -> str:
    lines = [f"{trace.engine} {trace.n}"]
    for u, v, w in trace.edges:
        lines.append(f"edge {u} {v} {w}" if trace.engine == APSP else f"edge {u} {v}")
    lines.extend(format_op(op) for op in trace.ops)
    return "\n".join(lines) + "\n"


# -- generation ---------------------------------------------------------------

class _WeightModel:
    """Edge weights that never close a negative cycle.

    A hidden potential ``phi`` bounds every weight from below by
    ``phi(v) - phi(u)``, so ``phi`` is a feasible price function for every
    graph the generator can produce.
    """

    def __init__(self, rng, n, lo, hi, neg_fraction, unweighted):
        self.rng = rng
        self.lo, self.hi = lo, hi
        self.neg = neg_fraction
        self.unweighted = unweighted
        spread = max(0, -lo)
        self.phi = [rng.randint(0, spread) for _ in range(n)]

    def __call__(self, u, v):
        if self.unweighted:
            return 1
        floor = max(self.lo, self.phi[v] - self.phi[u])
        if self.rng.random() < self.neg and floor <= -1:
            return self.rng.randint(floor, -1)
        return self.rng.randint(max(floor, 0), max(self.hi, floor, 0))


def _random_edges(rng, n, m, allowed=lambda u, v: True):
    cap = sum(1 for u in range(n) for v in range(n) if u != v and allowed(u, v)) if n <= 60 else n * (n - 1)
    m = min(m, cap)
    edges = set()
    tries = 0
    while len(edges) < m and tries < 50 * (m + 1):
        tries += 1
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v and allowed(u, v):
            edges.add((u, v))
    return sorted(edges)


def generate_trace(
    n: int,
    m: int,
    ops: int,
    weight_range: tuple[int, int] = (-5, 50),
    neg_fraction: float = 0.0,
    engine: str = APSP,
    seed: int = 0,
    update_fraction: float = 0.4,
    unweighted: bool = False,
) -> Trace:
    """Reproducible random trace for either engine.

    ``apsp``: about ``update_fraction`` of the ops are vertex updates that keep
    the average degree near ``m/n``, the rest split evenly into ``dist`` and
    ``path``.  ``dag``: inserts are proposed only when they keep the graph
    acyclic; deletes pick an existing edge; the rest are ``reach`` queries.
    """
    lo, hi = weight_range
    if n < 0 or m < 0 or ops < 0:
        raise ValueError("n, m and ops must be non-negative")
    if lo > hi:
        raise ValueError("empty weight range")
    if not 0.0 <= neg_fraction <= 1.0 or not 0.0 <= update_fraction <= 1.0:
        raise ValueError("fractions must lie in [0, 1]")
    if neg_fraction > 0 and lo >= 0:
        raise ValueError("negative edges requested but the weight range has no negative values")
    if ops and n == 0:
        raise ValueError("operations need at least one vertex")
    rng = random.Random(seed)
    if engine == APSP:
        return _generate_apsp(rng, n, m, ops, lo, hi, neg_fraction, update_fraction, unweighted)
    if engine == DAG:
        return _generate_dag(rng, n, m, ops, update_fraction)
    raise ValueError(f"unknown engine {engine!r}")


def _generate_apsp(rng, n, m, ops, lo, hi, neg_fraction, update_fraction, unweighted) -> Trace:
    weight = _WeightModel(rng, n, lo, hi, neg_fraction, unweighted)
    trace = Trace(APSP, n)
    trace.edges = [(u, v, weight(u, v)) for u, v in _random_edges(rng, n, m)]
    avg = m / n if n else 0
    for _ in range(ops):
        if n > 1 and rng.random() < update_fraction:
            v = rng.randrange(n)
            others = [u for u in range(n) if u != v]
            k_out = min(len(others), rng.randint(0, max(1, 2 * round(avg))))
            k_in = min(len(others), rng.randint(0, max(1, 2 * round(avg))))
            out = tuple((u, weight(v, u)) for u in sorted(rng.sample(others, k_out)))
            inn = tuple((u, weight(u, v)) for u in sorted(rng.sample(others, k_in)))
            trace.ops.append(VSet(v, out, inn))
        else:
            s, t = rng.randrange(n), rng.randrange(n)
            trace.ops.append(Dist(s, t) if rng.random() < 0.5 else Path(s, t))
    return trace


def _reaches(out, s, t) -> bool:
    seen = {s}
    stack = [s]
    while stack:
        u = stack.pop()
        if u == t:
            return True
        for v in out[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return False


def _generate_dag(rng, n, m, ops, update_fraction) -> Trace:
    rank = list(range(n))
    rng.shuffle(rank)
    trace = Trace(DAG, n)
    trace.edges = [(u, v, 1) for u, v in _random_edges(rng, n, m, lambda u, v: rank[u] < rank[v])]
    out = [set() for _ in range(n)]
    edge_set = set()
    for u, v, _ in trace.edges:
        out[u].add(v)
        edge_set.add((u, v))
    for _ in range(ops):
        x = rng.random()
        if n > 1 and x < update_fraction * 0.6:
            i, j = rng.sample(range(n), 2)
            if (i, j) in edge_set or _reaches(out, j, i):
                i, j = j, i
            if (i, j) not in edge_set and not _reaches(out, j, i):
                out[i].add(j)
                edge_set.add((i, j))
                trace.ops.append(EdgeIns(i, j))
                continue
        if edge_set and x < update_fraction:
            i, j = rng.choice(sorted(edge_set))
            out[i].discard(j)
            edge_set.discard((i, j))
            trace.ops.append(EdgeDel(i, j))
            continue
        trace.ops.append(Reach(rng.randrange(n), rng.randrange(n)))
    return trace


def generate_cycle_trace(n: int, m: int, windows: int = 3, queries: int = 6, seed: int = 0) -> Trace:
    """APSP trace that repeatedly opens and closes a negative cycle.

    Each window starts with a vertex update giving ``v`` a two-edge negative
    cycle through a neighbour, issues queries, then a second update gives
    ``v`` benign edges again and more queries follow.
    """
    if n < 2:
        raise ValueError("need at least two vertices")
    rng = random.Random(seed)
    trace = _generate_apsp(rng, n, m, 0, 0, 20, 0.0, 0.0, False)
    for _ in range(windows):
        v, u = rng.sample(range(n), 2)
        trace.ops.append(VSet(v, ((u, -rng.randint(3, 9)),), ((u, rng.randint(0, 2)),)))
        for _ in range(queries):
            trace.ops.append(Dist(rng.randrange(n), rng.randrange(n)))
        others = [x for x in range(n) if x != v]
        out = tuple((x, rng.randint(0, 20)) for x in sorted(rng.sample(others, min(2, len(others)))))
        inn = tuple((x, rng.randint(0, 20)) for x in sorted(rng.sample(others, min(2, len(others)))))
        trace.ops.append(VSet(v, out, inn))
        for _ in range(queries):
            trace.ops.append(rng.choice((Dist, Path))(rng.randrange(n), rng.randrange(n)))
    return trace
