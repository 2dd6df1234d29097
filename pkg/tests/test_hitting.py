import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynapsp.errors import HittingSetPreconditionError
from dynapsp.hitting import (
    RootedTree,
    covers_all,
    greedy_bound,
    greedy_hitting_set,
    prune_to_depth,
    random_hitting_set,
    tree_bound,
    tree_hitting_set,
)
from dynapsp.pathtree import INF, HeavyPathDecomposition, WeightedPathTree

from oracles import all_root_paths


@st.composite
def parent_arrays(draw, max_n=40):
    n = draw(st.integers(1, max_n))
    return [-1] + [draw(st.integers(0, v - 1)) for v in range(1, n)]


def naive_root_path(parent, v):
    out = []
    while v >= 0:
        out.append(v)
        v = parent[v]
    return out


def naive_subtree(parent, v):
    return [x for x in range(len(parent)) if v in naive_root_path(parent, x)]


@settings(max_examples=80, deadline=None)
@given(parent_arrays(), st.data())
def test_weighted_path_tree_matches_naive(parent, data):
    n = len(parent)
    w = data.draw(st.lists(st.integers(-20, 20), min_size=n, max_size=n))
    hld = HeavyPathDecomposition(parent)
    wpt = WeightedPathTree(hld, w)
    ref = list(w)
    for _ in range(data.draw(st.integers(1, 25))):
        kind = data.draw(st.sampled_from(["path", "sub", "reset"]))
        v = data.draw(st.integers(0, n - 1))
        if kind == "path":
            d = data.draw(st.integers(-5, 5))
            wpt.add_root_path(v, d)
            for x in naive_root_path(parent, v):
                ref[x] += d
        elif kind == "sub":
            d = data.draw(st.integers(-5, 5))
            wpt.add_subtree(v, d)
            for x in naive_subtree(parent, v):
                ref[x] += d
        else:
            wpt.reset(v)
            ref[v] = INF
        assert [wpt.weight(x) for x in range(n)] == ref
        val, arg = wpt.min()
        assert val == min(ref)
        if val != INF:
            assert ref[arg] == val


def test_hld_rejects_forests():
    with pytest.raises(ValueError):
        HeavyPathDecomposition([-1, -1])


def test_random_hitting_set_size_and_determinism():
    a = random_hitting_set(100, 5, c=2, seed=7)
    assert a == random_hitting_set(100, 5, c=2, seed=7)
    assert a == sorted(set(a))
    assert len(a) <= math.ceil(2 * (100 / 5) * math.log(100))
    assert random_hitting_set(1, 2) == [0]
    assert random_hitting_set(0, 2) == []


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 30), st.integers(1, 5), st.data())
def test_greedy_covers_and_respects_bound(n, k, data):
    k = min(k, n)
    sets = data.draw(
        st.lists(st.lists(st.integers(0, n - 1), min_size=k, max_size=n, unique=True), max_size=40)
    )
    picked = greedy_hitting_set(sets, k, n)
    assert covers_all(picked, sets)
    assert len(picked) <= greedy_bound(n, k, len(sets))


def test_greedy_precondition():
    with pytest.raises(HittingSetPreconditionError):
        greedy_hitting_set([[1, 2], [3]], 2)


def test_greedy_empty_family():
    assert greedy_hitting_set([], 3) == []


def test_prune_keeps_only_ancestors_of_depth_k():
    tree = RootedTree([10, 11, 12, 13, 14], [-1, 0, 1, 0, 3])
    pruned = prune_to_depth(tree, 2)
    assert sorted(pruned.vertices) == [10, 11, 12, 13, 14]
    pruned = prune_to_depth(RootedTree([10, 11, 12, 13], [-1, 0, 1, 0]), 2)
    assert sorted(pruned.vertices) == [10, 11, 12]
    assert prune_to_depth(RootedTree([1], [-1]), 1).vertices == []


def random_family(rng, n, total, max_tree):
    trees = []
    left = total
    while left > 0:
        size = min(left, rng.randint(1, max_tree))
        verts = rng.sample(range(n), min(size, n))
        par = [-1] + [rng.randrange(i) for i in range(1, len(verts))]
        trees.append(RootedTree(verts, par))
        left -= len(verts)
    return trees


@pytest.mark.parametrize("k", [0, 1, 2, 3, 5])
def test_tree_hitting_set_checked_mode(k):
    rng = random.Random(k)
    for _ in range(40):
        n = rng.randint(3, 40)
        trees = random_family(rng, n, rng.randint(1, 120), 25)
        picked = tree_hitting_set(trees, k, n, check=True)
        paths = [p for t in trees for p in all_root_paths(t.vertices, t.parent, k)]
        assert covers_all(picked, paths)
        assert len(picked) <= tree_bound(n, k, len(paths))
        assert len(picked) == len(set(picked))


def test_tree_hitting_set_k0_hits_roots():
    trees = [RootedTree([4, 1], [-1, 0]), RootedTree([2], [-1]), RootedTree([4], [-1])]
    assert sorted(tree_hitting_set(trees, 0, 5)) == [2, 4]


def test_tree_hitting_set_shallow_trees_need_nothing():
    trees = [RootedTree([0, 1], [-1, 0]), RootedTree([2], [-1])]
    assert tree_hitting_set(trees, 3, 3) == []


def test_tree_hitting_set_prefers_shared_vertex():
    # vertex 9 sits on every depth-1 root path
    trees = [RootedTree([9, i], [-1, 0]) for i in range(5)]
    assert tree_hitting_set(trees, 1, 10) == [9]
