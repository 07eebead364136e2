import random
from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bimatch import _kernels
from bimatch.explorer import (
    CapExceededError, analyze, build_graph, crossing_table, enumerate_matchings,
    lower_bound_instance,
)
from bimatch.hamsandwich import ham_sandwich_matching
from bimatch.matching import compatible, validate_matching
from _gen import all_matchings_by_permutation, random_points


def bfs(adj, s):
    """Oracle: plain queue BFS on a boolean matrix."""
    dist = [-1] * len(adj)
    dist[s] = 0
    q = deque([s])
    while q:
        u = q.popleft()
        for v in range(len(adj)):
            if adj[u][v] and dist[v] < 0:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_enumeration_matches_permutation_filter(seed, n):
    P = random_points(random.Random(seed), n)
    assert enumerate_matchings(P) == sorted(all_matchings_by_permutation(P), key=lambda m: m.pairs)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_graph_edges_match_compatibility(seed, n):
    P = random_points(random.Random(seed), n)
    G = build_graph(P)
    for i, a in enumerate(G.nodes):
        for j, b in enumerate(G.nodes):
            assert bool(G.adj[i, j]) == (i != j and compatible(P, a, b))
    A = analyze(G)
    assert A.connected
    for s in range(len(G.nodes)):
        assert list(A.dist[s]) == bfs(G.adj.tolist(), s)


@pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not available")
@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 5))
def test_numba_agrees_with_numpy(seed, n):
    P = random_points(random.Random(seed), n)
    nodes = enumerate_matchings(P)
    assign = np.array([[dict(m.pairs)[r] for r in range(n)] for m in nodes], dtype=np.int64)
    crosses = crossing_table(P)
    a = _kernels.compat_matrix(assign, crosses, use_numba=False)
    b = _kernels.compat_matrix(assign, crosses, use_numba=True)
    assert (a == b).all()
    assert (_kernels.bfs_all(a, use_numba=False) == _kernels.bfs_all(a, use_numba=True)).all()


def test_path_graph_distances():
    m = 6
    adj = np.zeros((m, m), dtype=np.bool_)
    for i in range(m - 1):
        adj[i, i + 1] = adj[i + 1, i] = True
    for flag in (False, True) if _kernels.HAVE_NUMBA else (False,):
        d = _kernels.bfs_all(adj, use_numba=flag)
        assert d[0, m - 1] == m - 1 and d.max() == m - 1
    adj[2, 3] = adj[3, 2] = False
    assert _kernels.bfs_all(adj, use_numba=False)[0, 5] == -1


def test_crossing_table_symmetric():
    P = random_points(random.Random(5), 4)
    t = crossing_table(P)
    assert (t == t.transpose(2, 3, 0, 1)).all()
    assert not any(t[r, b, r, b] for r in range(4) for b in range(4))


def test_cap():
    P = random_points(random.Random(0), 3)
    with pytest.raises(CapExceededError):
        enumerate_matchings(P, cap=2)


def test_cap_from_environment(monkeypatch):
    monkeypatch.setenv("BIMATCH_ENUM_CAP", "2")
    with pytest.raises(CapExceededError):
        build_graph(random_points(random.Random(0), 3))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lower_bound_family(n):
    inst = lower_bound_instance(n)
    P = inst.P
    assert P.n == 2 * n
    assert validate_matching(P, inst.M) and validate_matching(P, inst.M2)
    G = build_graph(P)
    A = analyze(G)
    assert A.connected
    assert A.distance(G, inst.M, inst.M2) >= n
    assert A.distance(G, inst.M, inst.M2) == bfs(G.adj.tolist(), G.index[inst.M])[G.index[inst.M2]]
    # M's only compatible neighbor keeps the arcs' nesting
    assert G.degree(inst.M) == 1


def test_lower_bound_points_on_circle():
    inst = lower_bound_instance(2)
    for p in inst.P.reds + inst.P.blues:
        assert p[0] ** 2 + p[1] ** 2 == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lower_bound_pair_contains_ham_sandwich_matching(n):
    inst = lower_bound_instance(n)
    assert ham_sandwich_matching(inst.P).matching in (inst.M, inst.M2)


def test_lower_bound_rejects_zero():
    with pytest.raises(ValueError):
        lower_bound_instance(0)
