import pytest
from hypothesis import given, strategies as st

from conftest import graphs
from lowbranch.experiments import random_star_instance, star_degree
from lowbranch.graph import Graph
from lowbranch.oracle import enumerate_star_two_matchings
from lowbranch.stars import (
    HypothesisViolation,
    StageFailure,
    StarMatching,
    StarTwoMatching,
    bipartite_star_matching,
    find_hall_violator,
    meets_star_bound,
    star_two_matching,
    validate_star_matching,
)

K32 = Graph(5, [(a, b) for a in range(3) for b in (3, 4)])


def test_single_edge():
    sm = bipartite_star_matching(Graph(2, [(0, 1)]), [0], [1], 1)
    assert sm.t == 0 and sm.plain_edges == ((0, 1),)


def test_k32_needs_one_star():
    sm = bipartite_star_matching(K32, [0, 1, 2], [3, 4], 1)
    assert isinstance(sm, StarMatching)
    assert sm.t == 1 and len(sm.plain_edges) == 1
    assert sm.stars[0][0] in (3, 4) and len(sm.stars[0][1]) == 2
    assert validate_star_matching(K32, sm, require_spanning=True, s=1).ok
    # no perfect matching, so t=0 is impossible
    assert all(x.t >= 1 for x in enumerate_star_two_matchings(K32, 1))


def test_unsaturated_b_is_reported():
    g = Graph(3, [(0, 1), (0, 2)])
    with pytest.raises(HypothesisViolation) as info:
        bipartite_star_matching(g, [0], [1, 2], 1)
    assert set(info.value.witness) <= {1, 2}


def test_degree_bound_is_reported():
    g = Graph(6, [(0, 3), (1, 4), (2, 5), (0, 4)])
    with pytest.raises(HypothesisViolation):
        bipartite_star_matching(g, [0, 1, 2], [3, 4, 5], 1)


def test_hall_violator_examples():
    assert find_hall_violator(Graph(4, [(0, 2), (0, 3), (1, 2), (1, 3)]), [0, 1], [2, 3]) is None
    assert find_hall_violator(Graph(3, [(0, 2), (1, 2)]), [0, 1], [2]) == {0, 1}
    assert find_hall_violator(Graph.cycle(6), [0, 2, 4], [1, 3, 5]) is None


def test_meets_star_bound_exact():
    # n / (sqrt(1) + 1)^2 = n / 4
    assert meets_star_bound(3, 12, 1) and not meets_star_bound(2, 12, 1)
    # n / (sqrt(2) + 1)^2 = 17.15... for n = 100
    assert meets_star_bound(18, 100, 2) and not meets_star_bound(17, 100, 2)
    assert star_degree(100, 2) == 18


def test_star_two_matching_examples():
    c5 = Graph.cycle(5)
    sm = star_two_matching(c5, 1)
    assert sm.t == 0 and len(sm.odd_cycles) == 1
    assert validate_star_matching(c5, sm, True, 1).ok
    k4 = Graph.complete(4)
    sm = star_two_matching(k4, 1)
    assert sm.t == 0 and len(sm.plain_edges) == 2


def test_five_vertex_example():
    # c=0, l1=1, l2=2, x=3, y=4; the triangle c-l1-l2 plus the edge x-y needs no star
    g = Graph(5, [(0, 1), (0, 2), (0, 3), (3, 4), (1, 2)])
    sm = star_two_matching(g, 1)
    assert sm == StarTwoMatching.build([(3, 4)], [(0, 1, 2)])
    listing = enumerate_star_two_matchings(g, 1)
    assert listing[0] == sm
    assert StarTwoMatching.build([(3, 4)], stars=[(0, (1, 2))]) in listing


def test_validator_catches_problems():
    g = Graph.cycle(5)
    bad = StarTwoMatching.build([(0, 2)], stars=[(3, (4,))])
    problems = validate_star_matching(g, bad).problems
    assert any("phantom edge" in p for p in problems)
    assert any("trivial star" in p for p in problems)
    assert not validate_star_matching(g, StarTwoMatching.build([(0, 1)]), require_spanning=True).ok
    even = StarTwoMatching(plain_edges=(), odd_cycles=((0, 1, 2, 3),), stars=())
    assert not validate_star_matching(Graph.complete(4), even).ok


def test_star_matching_forbids_cycles():
    with pytest.raises(ValueError):
        StarMatching.build(cycles=[(0, 1, 2)])


def test_bipartite_input_gives_star_matching():
    g = Graph(7, [(0, 3), (0, 4), (1, 3), (1, 5), (2, 4), (2, 6), (0, 5)])
    try:
        sm = star_two_matching(g, 2)
    except StageFailure:
        return
    assert not sm.odd_cycles


@given(st.integers(0, 2**32), st.integers(4, 40), st.integers(1, 4))
def test_degree_bound_on_random_instances(seed, n, s):
    inst = random_star_instance(n, s, seed)
    if inst is None:
        return
    g, a_side, b_side = inst
    sm = bipartite_star_matching(g, a_side, b_side, s)
    assert validate_star_matching(g, sm, require_spanning=True, s=s).ok
    assert all(c in b_side for c, _ in sm.stars)
    # averaging: each chosen centre sees at least the mean degree of its violator into N(U)
    for (centre, _), u_set in zip(sm.trace["rounds"], sm.trace.get("violators", ())):
        nbhd = g.neighborhood(u_set)
        assert g.degree_into(centre, u_set) * len(nbhd) >= sum(g.degree(a) for a in u_set)
    if sm.trace["rounds"] and len(a_side) > len(b_side):
        # round 1: |A| - d(b1) <= s * n / (sqrt(s) + 1)^2, squared out
        x = len(a_side) - g.degree(sm.trace["rounds"][0][0])
        rhs = s * n - x * (s + 1)
        assert x <= 0 or (rhs >= 0 and 4 * x * x * s <= rhs * rhs)


@given(graphs(min_n=2, max_n=8, connected=True), st.integers(1, 3))
def test_star_two_matching_is_certified(g, s):
    try:
        sm = star_two_matching(g, s)
    except StageFailure as exc:
        assert exc.stage in ("two-matching", "exceptional-matching", "orphan", "star-budget")
        return
    assert validate_star_matching(g, sm, require_spanning=True, s=s).ok
    if g.is_bipartite():
        assert not sm.odd_cycles
