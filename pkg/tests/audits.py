"""Invariant audits shared by the unit tests and the acceptance suite.

Each audit returns a list of human-readable violations (empty when clean).
"""
from __future__ import annotations

import math

from dynapsp.graph import LexWeight

from oracles import INF_PAIR, bellman_ford_lex, hop_dp


def as_pair(key_or_lex):
    w = key_or_lex if isinstance(key_or_lex, LexWeight) else LexWeight.from_key(key_or_lex)
    return INF_PAIR if w.is_inf else (w.length, w.hops)


def audit_phase(g0, pi, C, h, tau, exclude=(), sandwich=False):
    """Congestion bound, |C| bound, alpha bookkeeping and (optionally) the hop sandwich."""
    bad = []
    n = g0.n
    excluded = set(exclude)
    edges = [e for e in g0.edges() if e[0] not in excluded and e[1] not in excluded]
    m = len(edges)
    for v in range(n):
        if pi.alpha[v] > tau:
            bad.append(f"alpha({v})={pi.alpha[v]} > tau={tau}")
    if tau and len(C) > 2 * n * m * h / tau:
        bad.append(f"|C|={len(C)} > 2nmh/tau={2 * n * m * h / tau:.2f}")
    deg = [0] * n
    for u, v, _ in edges:
        deg[v] += 1
    alpha = [0] * n
    for (s, t), rec in pi.paths.items():
        for v in set(rec.vertices):
            alpha[v] += deg[t]
    if alpha != list(pi.alpha):
        bad.append("alpha counters disagree with a recount over stored paths")
    if sandwich:
        all_edges = g0.edges()
        for s in range(n):
            lo = hop_dp(n, all_edges, s, h)
            hi = hop_dp(n, all_edges, s, h, forbidden=set(C) | excluded)
            for t in range(n):
                got = as_pair(pi.key(s, t))
                if s == t and pi.get(s, t) is not None:
                    continue
                if not (lo[t] <= got <= hi[t]):
                    bad.append(f"sandwich broken at ({s},{t}): {lo[t]} <= {got} <= {hi[t]}")
    return bad


def audit_rebuild(eng):
    """For every repaired target: delta_{G-D} <= len(pi') <= delta^h_{G-(C|D)}."""
    bad = []
    g, n = eng.g, eng.g.n
    edges = g.edges()
    D = set(eng.D)
    CD = D | set(eng.C)
    for s, tree in eng.rebuild.items():
        lo = bellman_ford_lex(n, edges, s, forbidden=D) if s not in D else None
        hi = hop_dp(n, edges, s, eng.h, forbidden=CD)
        for t in tree.targets:
            got = as_pair(eng.pi_prime_key(s, t))
            low = (0, 0) if s == t else (lo[t] if lo is not None else INF_PAIR)
            if s == t:
                continue
            if not (low <= got <= hi[t]):
                bad.append(f"rebuild contract broken at ({s},{t}): {low} <= {got} <= {hi[t]}")
            if got[0] != math.inf:
                path = eng.pi_prime_path(s, t)
                if any(v in D for v in path):
                    bad.append(f"repaired path {s}->{t} still meets D")
                if path[0] != s or path[-1] != t:
                    bad.append(f"repaired path {s}->{t} has wrong endpoints")
    return bad


def audit_charging(eng, stats):
    bad = []
    q = stats.get("qs_degree_mass", 0)
    a = stats.get("alpha_D", 0)
    dt = stats.get("D_tau", 0)
    if not (q <= a <= dt):
        bad.append(f"charging chain broken: {q} <= {a} <= {dt}")
    # recount independently from the membership index
    recount = sum(eng.pi.deg[t] for tree in eng.rebuild.values() for t in tree.targets)
    if recount != q:
        bad.append(f"Q_s degree mass recount {recount} != reported {q}")
    return bad


def audit_hitting(eng):
    """Deterministic mode: every pi' with at least h distinct vertices contains a vertex of H."""
    bad = []
    H = set(eng.H)
    n = eng.g.n
    for s in range(n):
        for t in range(n):
            if s == t:
                continue
            key = eng.pi_prime_key(s, t)
            if key == math.inf:
                continue
            rec = eng.pi.get(s, t)
            if rec is not None and rec.negative:
                continue
            path = eng.pi_prime_path(s, t)
            if len(set(path)) >= eng.h and not H.intersection(path):
                bad.append(f"pi'({s},{t}) with {len(path)} vertices misses H")
    return bad
