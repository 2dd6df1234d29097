import random

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from dynapsp.dagreach import DEFAULT_PRIME, DagReach, PrimeField, begin_phase, dag_path_counts
from dynapsp.errors import MalformedUpdateError, NotADagError
from dynapsp.graph import DynamicGraph

from oracles import count_paths_dfs, gauss_inverse, reachable


def dag(n, pairs):
    return DynamicGraph(n, [(u, v, 1) for u, v in pairs])


@st.composite
def small_dags(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    order = draw(st.permutations(range(n)))
    pairs = [(order[a], order[b]) for a in range(n) for b in range(a + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return n, chosen


def test_edgeless_is_identity():
    assert (dag_path_counts(dag(4, [])) == np.eye(4, dtype=np.int64)).all()


def test_diamond_counts_two():
    M = dag_path_counts(dag(4, [(0, 1), (0, 2), (1, 3), (2, 3)]))
    assert M[0, 3] == 2 and M[0, 0] == 1 and M[3, 0] == 0


def test_path_graph():
    M = dag_path_counts(dag(3, [(0, 1), (1, 2)]))
    assert M[0, 2] == 1 and M[0, 0] == 1


def test_cycle_rejected():
    with pytest.raises(NotADagError):
        dag_path_counts(dag(3, [(0, 1), (1, 2), (2, 0)]))


@settings(max_examples=120, deadline=None)
@given(small_dags())
def test_counts_equal_dfs_enumeration(data):
    n, pairs = data
    p = 101
    M = dag_path_counts(dag(n, pairs), PrimeField(p))
    edges = [(u, v, 1) for u, v in pairs]
    for s in range(n):
        for t in range(n):
            assert M[s, t] == count_paths_dfs(n, edges, s, t) % p


@settings(max_examples=40, deadline=None)
@given(small_dags(max_n=8))
def test_inverse_times_matrix_is_identity(data):
    n, pairs = data
    p = DEFAULT_PRIME
    M0inv = begin_phase(dag(n, pairs), PrimeField(p), 4).M0inv
    A = np.eye(n, dtype=object)
    for u, v in pairs:
        A[u, v] -= 1
    prod = (M0inv.astype(object) @ A) % p
    assert (prod == np.eye(n, dtype=object)).all()


def test_prime_field():
    with pytest.raises(ValueError):
        PrimeField(15)
    f = PrimeField.random(123)
    assert sympy.isprime(f.p) and (1 << 30) <= f.p < (1 << 31)
    assert f == PrimeField.random(123)
    assert PrimeField(2**61 - 1).dtype is object


def test_insert_delete_roundtrip():
    r = DagReach(dag(4, [(0, 1), (2, 3)]), t=8)
    before = [[r.entry(s, t) for t in range(4)] for s in range(4)]
    r.insert(1, 2)
    assert r.reach_query(0, 3)
    r.delete(1, 2)
    assert [[r.entry(s, t) for t in range(4)] for s in range(4)] == before
    assert r.phase.k == 0


def test_rejections():
    r = DagReach(dag(3, [(0, 1), (1, 2)]))
    with pytest.raises(NotADagError):
        r.insert(1, 1)
    with pytest.raises(NotADagError):
        r.insert(2, 0)
    with pytest.raises(MalformedUpdateError):
        r.delete(0, 2)
    with pytest.raises(MalformedUpdateError):
        r.insert(0, 1)
    with pytest.raises(MalformedUpdateError):
        r.reach_query(0, 7)


def test_queries_trivial_cases():
    r = DagReach(dag(3, []))
    assert r.reach_query(1, 1)
    assert not r.reach_query(0, 1)


@pytest.mark.parametrize("t", [1, 2, 4, 16])
@pytest.mark.parametrize("p", [DEFAULT_PRIME, 2**61 - 1, 10007])
def test_woodbury_matches_gauss(t, p):
    rng = random.Random(t * 7 + p % 97)
    n = 12
    order = list(range(n))
    rng.shuffle(order)
    edges = {(order[a], order[b]) for a, b in (sorted(rng.sample(range(n), 2)) for _ in range(14))}
    r = DagReach(dag(n, edges), t=t, field=PrimeField(p))
    for _ in range(60):
        if rng.random() < 0.55:
            i, j = rng.sample(range(n), 2)
            try:
                r.insert(i, j)
            except (NotADagError, MalformedUpdateError):
                continue
        else:
            cur = r.g.edges()
            if not cur:
                continue
            u, v, _ = rng.choice(cur)
            r.delete(u, v)
        M = [[int(a == b) for b in range(n)] for a in range(n)]
        for u, v, _ in r.g.edges():
            M[u][v] -= 1
        inv = gauss_inverse(M, p)
        edges_now = r.g.edges()
        for s in range(n):
            for tt in range(n):
                assert r.entry(s, tt) == inv[s][tt]
                assert r.reach_query(s, tt) == reachable(n, edges_now, s, tt)
        assert r.phase.k < t


def test_merged_entries_keep_k_small():
    r = DagReach(dag(4, [(0, 1)]), t=16)
    for _ in range(5):
        r.delete(0, 1)
        r.insert(0, 1)
    assert r.phase.k == 0
    r.delete(0, 1)
    r.insert(1, 0)
    assert r.phase.k == 2
    assert r.reach_query(1, 0) and not r.reach_query(0, 1)
