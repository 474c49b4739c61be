from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given

from conftest import graphs
from lowbranch.generators import gen_extremal
from lowbranch.graph import Graph, verify_tree
from lowbranch.oracle import (
    OracleError,
    bareiss_determinant,
    enumerate_spanning_trees,
    enumerate_star_two_matchings,
    fractional_matching_number,
    frontier_spanning_trees,
    min_branch_tree,
    spanning_tree_count,
)
from lowbranch.stars import validate_star_matching

STAR = Graph(5, [(0, 1), (0, 2), (0, 3), (0, 4)])
PETERSEN = Graph(
    10,
    [(i, (i + 1) % 5) for i in range(5)]
    + [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    + [(i, i + 5) for i in range(5)],
)


def brute_min_branches(g: Graph) -> int:
    """Smallest branch count over all (n-1)-edge subsets that form a tree."""
    best = None
    for chosen in combinations(g.edges(), g.n - 1):
        parent = list(range(g.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for u, v in chosen:
            a, b = find(u), find(v)
            if a == b:
                ok = False
                break
            parent[a] = b
        if not ok:
            continue
        deg = [0] * g.n
        for u, v in chosen:
            deg[u] += 1
            deg[v] += 1
        b = sum(d >= 3 for d in deg)
        best = b if best is None else min(best, b)
    return best


def test_bareiss():
    assert bareiss_determinant([[2, -1], [-1, 2]]) == 3
    assert bareiss_determinant([[0, 1], [1, 0]]) == -1
    assert bareiss_determinant([[1, 2], [2, 4]]) == 0


@pytest.mark.parametrize(
    "g, count",
    [(Graph.complete(4), 16), (Graph.complete(5), 125), (Graph.cycle(7), 7), (PETERSEN, 2000), (STAR, 1)],
)
def test_tree_counts(g, count):
    assert spanning_tree_count(g) == count


@given(graphs(1, 6, connected=True))
def test_two_enumerators_agree(g):
    a = sorted(enumerate_spanning_trees(g))
    b = sorted(frontier_spanning_trees(g))
    assert a == b
    assert len(set(a)) == len(a) == spanning_tree_count(g)


@pytest.mark.parametrize(
    "g, expected",
    [(Graph.path(6), 0), (Graph.cycle(6), 0), (STAR, 1), (PETERSEN, 0), (gen_extremal(1, 3), 2)],
)
def test_min_branches_known(g, expected):
    res = min_branch_tree(g)
    assert res.status == "exact" and res.min_branches == expected
    assert not verify_tree(g, res.witness.edges, expected)


def test_extremal_larger_instances():
    assert min_branch_tree(gen_extremal(2, 3)).min_branches == 3
    assert min_branch_tree(gen_extremal(1, 4)).min_branches == 2


@given(graphs(2, 7, connected=True))
def test_bnb_matches_brute_force(g):
    want = brute_min_branches(g)
    assert min_branch_tree(g).min_branches == want
    assert min_branch_tree(g, method="exhaustive").min_branches == want


@given(graphs(2, 7, connected=True))
def test_limit_mode_is_consistent(g):
    exact = min_branch_tree(g).min_branches
    for limit in range(0, 3):
        res = min_branch_tree(g, limit=limit)
        if exact <= limit:
            # tiny graphs are answered exactly
            assert res.status in ("at_most", "exact")
            assert not verify_tree(g, res.witness.edges, limit)
        else:
            assert res.status == "more_than" and res.lower > limit


@given(graphs(3, 7, connected=True))
def test_adding_edges_never_hurts(g):
    missing = [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if not g.has_edge(u, v)]
    if missing:
        bigger = g.with_edges(missing[:1])
        assert min_branch_tree(bigger).min_branches <= min_branch_tree(g).min_branches


def test_disconnected_rejected():
    with pytest.raises(OracleError):
        min_branch_tree(Graph(4, [(0, 1), (2, 3)]))


def test_star_two_matching_enumeration():
    assert len(enumerate_star_two_matchings(Graph(2, [(0, 1)]), 0)) == 1
    c5 = enumerate_star_two_matchings(Graph.cycle(5), 0)
    assert [sm.odd_cycles for sm in c5] == [((0, 1, 2, 3, 4),)]
    assert len(enumerate_star_two_matchings(Graph.cycle(5), 1)) == 6
    claw = Graph(4, [(0, 1), (0, 2), (0, 3)])
    assert enumerate_star_two_matchings(claw, 0) == []
    assert [sm.stars for sm in enumerate_star_two_matchings(claw, 1)] == [((0, (1, 2, 3)),)]
    # three perfect matchings plus four claws
    assert len(enumerate_star_two_matchings(Graph.complete(4), 1)) == 7


@given(graphs(1, 7))
def test_enumerated_structures_are_valid_and_distinct(g):
    found = enumerate_star_two_matchings(g, 2)
    assert len(set(found)) == len(found)
    for sm in found:
        assert sm.t <= 2
        assert sm.covered == frozenset(range(g.n))
        assert validate_star_matching(g, sm, require_spanning=True, s=2).ok


@pytest.mark.parametrize(
    "g, value",
    [(Graph(2, [(0, 1)]), 1), (Graph.cycle(5), Fraction(5, 2)), (STAR, 1), (Graph.path(4), 2), (Graph.complete(4), 2)],
)
def test_fractional_matching_number(g, value):
    assert fractional_matching_number(g) == value
