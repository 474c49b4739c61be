from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given

from conftest import graphs
from lowbranch.graph import Graph
from lowbranch.matchings import (
    FractionalMatching,
    NotBasic,
    TwoMatching,
    basify,
    bipartite_max_matching,
    fractional_to_two_matching,
    gallai_edmonds_sets,
    matching_number,
    max_fractional_matching,
    max_matching,
    max_two_matching,
    pulleyblank_violations,
)
from lowbranch.oracle import fractional_matching_number

HALF = Fraction(1, 2)
K13 = Graph(4, [(0, 1), (0, 2), (0, 3)])
P3 = Graph.path(3)

# smallest graph on which no maximum 2-matching has its A1 edges saturating N(A1)
# (found by exhaustive search over connected graphs on at most 9 vertices)
PULLEYBLANK_GAP = Graph(9, [(0, 1), (0, 2), (1, 3), (3, 4), (4, 5), (3, 5), (2, 6), (6, 7), (7, 8), (6, 8)])


def _nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


@pytest.mark.parametrize("g, size", [(Graph.cycle(5), 2), (Graph.complete(4), 2), (P3, 1), (Graph(3), 0)])
def test_max_matching_examples(g, size):
    m = max_matching(g)
    assert m.size == size
    assert all(g.has_edge(u, v) for u, v in m.edges)


def test_gallai_edmonds_examples():
    ge = gallai_edmonds_sets(P3)
    assert ge.A == {0, 2} and ge.A1 == {0, 2}
    ge = gallai_edmonds_sets(Graph.complete(4))
    assert not ge.A and not ge.A1
    ge = gallai_edmonds_sets(Graph.cycle(5))
    assert ge.A == set(range(5)) and not ge.A1


def test_two_matching_examples():
    tm = max_two_matching(Graph.cycle(5))
    assert tm.odd_cycles and len(tm.odd_cycles[0]) == 5
    assert tm.size == Fraction(5, 2)
    tm = max_two_matching(Graph.cycle(4))
    assert len(tm.edges) == 2 and not tm.odd_cycles and tm.cycle_vertex_count == 0
    tm = max_two_matching(K13)
    assert len(tm.edges) == 1
    assert tm.unsaturated(4) <= gallai_edmonds_sets(K13).A1


def test_fractional_conversion_examples():
    f = FractionalMatching.of(2, {(0, 1): 1})
    assert fractional_to_two_matching(f).edges == ((0, 1),)
    c5 = FractionalMatching.of(5, {e: HALF for e in Graph.cycle(5).edges()})
    tm = fractional_to_two_matching(c5)
    assert len(tm.odd_cycles) == 1 and tm.size == c5.total() == Fraction(5, 2)
    c4 = FractionalMatching.of(4, {e: HALF for e in Graph.cycle(4).edges()})
    assert not c4.is_basic()
    with pytest.raises(NotBasic):
        fractional_to_two_matching(c4)


def test_basify_examples():
    c4 = FractionalMatching.of(4, {e: HALF for e in Graph.cycle(4).edges()})
    b = basify(c4)
    assert b.is_basic() and b.total() == 2
    p4 = FractionalMatching.of(4, {(0, 1): HALF, (1, 2): HALF, (2, 3): HALF})
    b = basify(p4, Graph.path(4))
    assert b.is_basic() and b.total() == 2
    c5 = FractionalMatching.of(5, {e: HALF for e in Graph.cycle(5).edges()})
    assert basify(c5) == c5


def test_invalid_fractional_weights():
    with pytest.raises(ValueError):
        FractionalMatching.of(3, {(0, 1): Fraction(1, 3)})
    with pytest.raises(ValueError):
        FractionalMatching.of(3, {(0, 1): 1, (1, 2): 1})


def test_pulleyblank_gap_instance():
    # both guarantees cannot hold at once here; the first one always does
    g = PULLEYBLANK_GAP
    ge = gallai_edmonds_sets(g)
    assert ge.A1 == {0}
    tm = max_two_matching(g, ge)
    assert tm.unsaturated(g.n) <= ge.A1
    assert tm.size == fractional_matching_number(g) == Fraction(9, 2)
    problems = pulleyblank_violations(g, tm, ge)
    assert problems == ["N(A1) vertices not matched into A1: [2]"] or problems == [
        "N(A1) vertices not matched into A1: [1]"
    ]


def test_pulleyblank_gap_is_genuine():
    # every maximum 2-matching saturating N(A1)={1,2} from A1={0} would need 0 matched twice
    g = PULLEYBLANK_GAP
    target = fractional_matching_number(g)
    assert target == Fraction(9, 2)
    # a 2-matching of size 9/2 must saturate everything but one vertex; 0 can serve only one of 1, 2
    assert g.neighbors(0) == {1, 2}


def test_bipartite_max_matching():
    # left 1 can only use right 0, so left 0 is pushed to right 1
    adj = {0: [0, 1], 1: [0], 2: [1]}
    assert bipartite_max_matching([0, 1, 2], adj, 2) == [1, 0]
    assert bipartite_max_matching([0, 1, 2], adj) == {0: 1, 1: 0}


@given(graphs(max_n=10))
def test_matching_number_agrees_with_networkx(g):
    assert matching_number(g) == len(nx.max_weight_matching(_nx(g), maxcardinality=True))


@given(graphs(max_n=8))
def test_gallai_edmonds_by_deletion(g):
    ge = gallai_edmonds_sets(g)
    nu = matching_number(g)
    for v in range(g.n):
        h, _ = g.remove_vertices([v])
        assert (v in ge.A) == (matching_number(h) == nu)
    for u, v in combinations(sorted(ge.A1), 2):
        assert not g.has_edge(u, v)


@given(graphs(max_n=9))
def test_two_matching_size_is_fractional_optimum(g):
    tm = max_two_matching(g)
    assert tm.size == fractional_matching_number(g) == max_fractional_matching(g).total()
    assert isinstance(tm, TwoMatching)
    covered = [x for e in tm.edges for x in e] + [x for c in tm.odd_cycles for x in c]
    assert len(covered) == len(set(covered))
    assert all(len(c) % 2 == 1 and len(c) >= 3 for c in tm.odd_cycles)
    assert all(g.has_edge(u, v) for u, v in tm.all_edges())


@given(graphs(max_n=9))
def test_first_guarantee(g):
    ge = gallai_edmonds_sets(g)
    assert max_two_matching(g, ge).unsaturated(g.n) <= ge.A1


@given(graphs(max_n=9))
def test_basified_optimum_is_basic(g):
    f = max_fractional_matching(g)
    b = basify(f, g)
    assert b.is_basic() and b.total() >= f.total()
    assert fractional_to_two_matching(b).size == b.total()
