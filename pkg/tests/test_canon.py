from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from conftest import graphs
from lowbranch import canon
from lowbranch.canon import CONNECTED_COUNTS, canonical_form, connected_graphs, connected_masks
from lowbranch.graph import Graph


def relabel(g: Graph, perm) -> Graph:
    return Graph(g.n, [(perm[u], perm[v]) for u, v in g.edges()])


@pytest.mark.parametrize("n", range(1, 8))
def test_counts_from_scratch(n):
    canon._memo.pop(n, None)
    assert len(connected_masks(n, use_cache=False)) == CONNECTED_COUNTS[n - 1]


def test_count_eight():
    assert len(connected_masks(8)) == CONNECTED_COUNTS[7]


@pytest.mark.parametrize("n", range(1, 7))
def test_listed_graphs_connected_and_pairwise_distinct(n):
    gs = connected_graphs(n)
    assert all(g.is_connected() for g in gs)
    nxs = [nx.Graph(list(g.edges())) for g in gs]
    for h in nxs:
        h.add_nodes_from(range(n))
    for i in range(len(nxs)):
        for j in range(i + 1, len(nxs)):
            assert not nx.is_isomorphic(nxs[i], nxs[j])


@given(graphs(1, 8), st.randoms(use_true_random=False))
def test_canonical_form_is_label_invariant(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    assert canonical_form(g.masks) == canonical_form(relabel(g, perm).masks)


@given(graphs(1, 6), graphs(1, 6))
def test_canonical_form_separates_non_isomorphic(a, b):
    if a.n != b.n:
        return
    na, nb = nx.Graph(list(a.edges())), nx.Graph(list(b.edges()))
    na.add_nodes_from(range(a.n))
    nb.add_nodes_from(range(b.n))
    assert (canonical_form(a.masks) == canonical_form(b.masks)) == nx.is_isomorphic(na, nb)


@given(graphs(1, 7))
def test_canonical_form_is_isomorphic_copy(g):
    c = Graph.from_masks(canonical_form(g.masks))
    assert c.m == g.m and sorted(c.degrees()) == sorted(g.degrees())
