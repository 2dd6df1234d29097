"""Execute a trace against an engine and collect a machine-readable report."""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field

from ..apsp import DynamicAPSP, Params
from ..dagreach import DagReach, PrimeField
from ..errors import (
    MalformedUpdateError,
    NoPathError,
    NotADagError,
    OracleMismatch,
    QueryForbiddenError,
)
from ..graph import INF, DynamicGraph, LexWeight
from .oracle import ApspOracle, dfs_reachable, identity_minus_adjacency, inverse_mod_p, path_key
from .trace import APSP, DAG, Dist, EdgeDel, EdgeIns, Path, Reach, Trace, VSet

SCHEMA_VERSION = 1


@dataclass
class RunReport:
    """One record per op plus a summary; ``to_jsonl`` is the on-disk form."""

    records: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def to_jsonl(self) -> str:
        lines = [json.dumps(r, sort_keys=True) for r in self.records]
        lines.append(json.dumps(self.summary, sort_keys=True))
        return "\n".join(lines) + "\n"

    @property
    def queries(self) -> list[dict]:
        return [r for r in self.records if r["op"] in ("dist", "path", "reach")]

    @property
    def updates(self) -> list[dict]:
        return [r for r in self.records if r["op"] in ("vset", "ins", "del")]


def _lex_json(key):
    if key == INF:
        return None
    w = LexWeight.from_key(key)
    return [w.length, w.hops]


def _dump(g: DynamicGraph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges()]}


def run_trace(
    trace: Trace,
    params: Params | None = None,
    oracle_check: bool = False,
    *,
    phase_len: int = 4,
    prime: PrimeField | None = None,
    inverse_checks: int = 0,
    seed: int = 0,
    timing: bool = False,
    audit=None,
) -> RunReport:
    """Run every op in order; with ``oracle_check`` the first wrong answer raises ``OracleMismatch``.

    ``inverse_checks`` (dag traces) compares that many random entries of the
    maintained inverse with a fresh Gaussian elimination after every edge
    update.  Wall time is recorded only with ``timing`` so that reports stay
    byte-identical between runs.  ``audit(engine, index)`` is called after
    construction (index -1) and after every update, for invariant checks.
    """
    start = time.perf_counter()
    if trace.engine == APSP or trace.engine is None:
        report = _run_apsp(trace, params or Params(), oracle_check, audit)
    elif trace.engine == DAG:
        report = _run_dag(trace, oracle_check, phase_len, prime or PrimeField(), inverse_checks, seed, audit)
    else:
        raise ValueError(f"unknown engine {trace.engine!r}")
    report.summary.update(record="summary", schema=SCHEMA_VERSION, engine=trace.engine or APSP, ops=len(trace.ops))
    if timing:
        report.summary["wall_time"] = round(time.perf_counter() - start, 6)
    return report


def _run_apsp(trace: Trace, params: Params, oracle_check: bool, audit) -> RunReport:
    eng = DynamicAPSP(DynamicGraph(trace.n, trace.edges), params)
    oracle = ApspOracle()
    report = RunReport()
    forbidden = 0
    phase_starts = [0] if eng.phases else []
    if audit:
        audit(eng, -1)

    def fail(index, op, detail, **extra):
        rec = {"index": index, "op": op, "detail": detail, "graph": _dump(eng.g), **extra}
        raise OracleMismatch(rec)

    for idx, op in enumerate(trace.ops):
        if isinstance(op, VSet):
            stats = eng.vertex_update(op.v, op.out, op.inn)
            if stats.get("phase_rebuilt"):
                phase_starts.append(idx)
            report.records.append({"index": idx, "op": "vset", "v": op.v, "counters": stats})
            if audit:
                audit(eng, idx)
            continue
        kind = "dist" if isinstance(op, Dist) else "path"
        rec = {"index": idx, "op": kind, "s": op.s, "t": op.t}
        try:
            key = eng.distance(op.s, op.t).key
        except QueryForbiddenError:
            forbidden += 1
            rec["status"] = "forbidden"
            if oracle_check and not oracle.negative_cycle(eng.g):
                fail(idx, kind, "query refused but the graph has no negative cycle", s=op.s, t=op.t)
            report.records.append(rec)
            continue
        rec["status"] = "ok"
        rec["dist"] = _lex_json(key)
        path = None
        if kind == "path":
            try:
                path = eng.shortest_path(op.s, op.t)
            except NoPathError:
                path = None
            rec["path"] = path
        if oracle_check:
            if oracle.negative_cycle(eng.g):
                fail(idx, kind, "query answered while a negative cycle exists", s=op.s, t=op.t)
            want = oracle.distance(eng.g, op.s, op.t)
            if want != key:
                fail(idx, kind, "distance differs", s=op.s, t=op.t, got=_lex_json(key), want=_lex_json(want))
            if kind == "path" and key != INF:
                if not path or path[0] != op.s or path[-1] != op.t or path_key(eng.g, path) != key:
                    fail(idx, kind, "path is not a shortest path of the current graph", s=op.s, t=op.t, path=path)
        report.records.append(rec)
    report.summary = {
        "queries": sum(1 for op in trace.ops if not isinstance(op, VSet)),
        "updates": sum(1 for op in trace.ops if isinstance(op, VSet)),
        "forbidden": forbidden,
        "phase_starts": phase_starts,
        "phases": eng.phases,
        "oracle_check": oracle_check,
    }
    return report


def _run_dag(trace, oracle_check, phase_len, prime, inverse_checks, seed, audit) -> RunReport:
    eng = DagReach(DynamicGraph(trace.n, trace.edges), t=phase_len, field=prime)
    rng = random.Random(seed)
    report = RunReport()
    rejected = 0
    if audit:
        audit(eng, -1)
    n = trace.n

    def fail(index, op, detail, **extra):
        raise OracleMismatch({"index": index, "op": op, "detail": detail, "graph": _dump(eng.g), "prime": prime.p, **extra})

    for idx, op in enumerate(trace.ops):
        if isinstance(op, Reach):
            got = eng.reach_query(op.s, op.t)
            if oracle_check and got != dfs_reachable(eng.g, op.s, op.t):
                fail(idx, "reach", "reachability differs", s=op.s, t=op.t, got=got)
            report.records.append({"index": idx, "op": "reach", "s": op.s, "t": op.t, "reach": got})
            continue
        kind = "ins" if isinstance(op, EdgeIns) else "del"
        rec = {"index": idx, "op": kind, "i": op.i, "j": op.j}
        before = eng.phases
        try:
            eng.insert(op.i, op.j) if kind == "ins" else eng.delete(op.i, op.j)
            rec["status"] = "ok"
        except (NotADagError, MalformedUpdateError) as exc:
            rejected += 1
            rec["status"] = "rejected"
            rec["reason"] = str(exc)
        rec["k"] = eng.phase.k
        rec["phase_restart"] = eng.phases != before
        if inverse_checks and rec["status"] == "ok" and n:
            inv = inverse_mod_p(identity_minus_adjacency(eng.g, prime.p), prime.p)
            for _ in range(inverse_checks):
                s, t = rng.randrange(n), rng.randrange(n)
                if eng.entry(s, t) != int(inv[s, t]):
                    fail(idx, kind, "inverse entry differs", s=s, t=t, got=eng.entry(s, t), want=int(inv[s, t]))
        report.records.append(rec)
        if audit:
            audit(eng, idx)
    report.summary = {
        "queries": sum(1 for op in trace.ops if isinstance(op, Reach)),
        "updates": sum(1 for op in trace.ops if not isinstance(op, Reach)),
        "rejected": rejected,
        "phases": eng.phases,
        "prime": prime.p,
        "phase_len": phase_len,
        "oracle_check": oracle_check,
    }
    return report
