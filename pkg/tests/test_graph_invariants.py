from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from condcolor.condcolor_modules.graph_core import (
    EdgeChoice,
    cartesian_product,
    complete,
    complete_bipartite,
    complete_kary_tree,
    cycle,
    gear,
    join,
    kary_edge_count,
    line_graph,
    path,
    prop2_chain,
    random_tree,
    wheel,
)
from tests.strategies import connected_graphs

GENERATED = (
    [path(n) for n in range(1, 9)]
    + [cycle(n) for n in range(3, 9)]
    + [complete(n) for n in range(1, 7)]
    + [complete_bipartite(m, n) for m in range(1, 4) for n in range(1, 5)]
    + [wheel(n) for n in range(4, 10)]
    + [gear(n) for n in range(3, 9)]
    + [complete_kary_tree(k, h) for k in (2, 3) for h in (1, 2, 3)]
    + [line_graph(complete_kary_tree(k, h)) for k in (2, 3) for h in (1, 2, 3)]
    + [prop2_chain(k, policy, seed=s) for k in (1, 4, 9) for policy in EdgeChoice for s in (0, 5)]
    + [random_tree(n, seed) for n in (2, 5, 9) for seed in (0, 1, 2)]
)

random_trees = st.builds(random_tree, st.integers(min_value=2, max_value=12), st.integers(min_value=0, max_value=10**6))


@pytest.mark.parametrize("g", GENERATED)
def test_generators_are_simple_connected_and_satisfy_handshake(g):
    assert sum(g.degrees) == 2 * g.m
    assert g.connected
    assert all(v not in g.neighbor_sets[v] for v in range(g.n))
    assert len(set(g.edges)) == g.m


@pytest.mark.parametrize("n", range(3, 11))
def test_gear_degree_distribution(n):
    g = gear(n)
    assert (g.n, g.m) == (2 * n + 1, 3 * n)
    assert Counter(g.degrees) == Counter({2: n, 3: n}) + Counter({n: 1})
    assert g.max_degree == max(n, 3)


@pytest.mark.parametrize("n", range(4, 12))
def test_wheel_degree_distribution(n):
    g = wheel(n)
    assert (g.n, g.m) == (n, 2 * (n - 1))
    assert Counter(g.degrees) == Counter({3: n - 1}) + Counter({n - 1: 1})
    assert g.degree(g.find_label("s")) == n - 1


@pytest.mark.parametrize("k", range(1, 13))
@pytest.mark.parametrize("policy", list(EdgeChoice))
def test_prop2_chain_counts(k, policy):
    g = prop2_chain(k, policy, seed=k)
    assert (g.n, g.m) == (k + 2, 2 * k + 1)


@pytest.mark.parametrize("k, h", [(2, 1), (2, 2), (2, 3), (3, 2), (4, 2)])
def test_kary_tree_edge_count(k, h):
    t = complete_kary_tree(k, h)
    assert t.m == kary_edge_count(k, h) == t.n - 1
    assert t.is_tree()


@settings(max_examples=60, deadline=None)
@given(connected_graphs(max_n=5), connected_graphs(max_n=5))
def test_join_degree_extremes(g1, g2):
    g = join(g1, g2)
    assert g.n == g1.n + g2.n
    assert g.m == g1.m + g2.m + g1.n * g2.n
    assert g.max_degree == max(g1.max_degree + g2.n, g2.max_degree + g1.n)
    assert g.min_degree == min(g1.min_degree + g2.n, g2.min_degree + g1.n)


@settings(max_examples=60, deadline=None)
@given(connected_graphs(max_n=4), connected_graphs(max_n=4))
def test_cartesian_product_degrees_add(g1, g2):
    g = cartesian_product(g1, g2)
    assert g.n == g1.n * g2.n
    for u1 in range(g1.n):
        for u2 in range(g2.n):
            assert g.degree(u1 * g2.n + u2) == g1.degree(u1) + g2.degree(u2)


@settings(max_examples=60, deadline=None)
@given(random_trees)
def test_line_graph_of_tree_degrees(t):
    lt = line_graph(t)
    assert lt.n == t.m
    for i, (u, v) in enumerate(t.edges):
        assert lt.degree(i) == t.degree(u) + t.degree(v) - 2


@pytest.mark.parametrize("k, h", [(2, 2), (2, 3), (3, 2)])
def test_line_graph_of_kary_tree_degrees(k, h):
    t = complete_kary_tree(k, h)
    lt = line_graph(t)
    assert lt.n == kary_edge_count(k, h)
    assert [lt.degree(i) for i in range(lt.n)] == [t.degree(u) + t.degree(v) - 2 for u, v in t.edges]
