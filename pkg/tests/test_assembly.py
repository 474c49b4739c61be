from __future__ import annotations

import warnings

import pytest
from hypothesis import given, strategies as st

from conftest import graphs
from lowbranch.assembly import (
    PlanError,
    SolveConfig,
    StarCycle,
    StitchPlan,
    build_star_cycle,
    part_budget,
    solve,
    star_cycle_to_tree,
    stitch,
    stitch_bound,
)
from lowbranch.generators import gen_extremal
from lowbranch.graph import Graph, verify_tree
from lowbranch.oracle import min_branch_tree

# triangle 0-1-2 with leaves 3 and 4 hanging off 0
KITE = Graph(5, [(0, 1), (1, 2), (0, 2), (0, 3), (0, 4)])


def test_star_cycle_to_tree():
    sc = StarCycle.build([0, 1, 2], [(0, [3, 4])])
    t = star_cycle_to_tree(sc)
    assert t.branch_count == 1 == sc.t
    assert not verify_tree(KITE, t.edges, 1)
    plain = star_cycle_to_tree(StarCycle.build([2, 0, 3, 1]))
    assert plain.branch_count == 0 and len(plain.edges) == 3


def test_star_cycle_problems():
    assert StarCycle.build([0, 1]).problems()
    bad = StarCycle.build([0, 1, 2], [(5, [3]), (0, [1])])
    msgs = bad.problems()
    assert any("off the cycle" in m for m in msgs) and any("on the cycle" in m for m in msgs)
    assert StarCycle.build([0, 1, 3]).problems(KITE) == ["edge (1, 3) is not in the graph"]
    with pytest.raises(PlanError):
        star_cycle_to_tree(StarCycle.build([1, 2, 3]))


def test_stitch_bound():
    assert stitch_bound([0]) == 0
    assert stitch_bound([2]) == 2
    assert stitch_bound([0, 0]) == 0
    assert stitch_bound([1, 0, 2]) == 4


def test_stitch_two_triangles_gives_a_path():
    plan = StitchPlan((StarCycle.build([0, 1, 2]), StarCycle.build([3, 4, 5])), ((3, 2),))
    res = stitch(plan)
    assert res.tree.branch_count == 0 == res.bound
    assert res.achieved == (True,)


def test_stitch_entry_at_leaf_is_not_achieved():
    a = StarCycle.build([0, 1, 2])
    b = StarCycle.build([3, 4, 5], [(3, [6])])
    res = stitch(StitchPlan((a, b), ((6, 0),)))
    assert res.achieved == (False,)
    assert res.tree.branch_count <= res.bound == 1


def test_stitch_rejects_bad_plans():
    a, b = StarCycle.build([0, 1, 2]), StarCycle.build([3, 4, 5])
    with pytest.raises(PlanError):
        stitch(StitchPlan((a, b), ()))
    with pytest.raises(PlanError):
        stitch(StitchPlan((a, b), ((0, 1),)))
    with pytest.raises(PlanError):
        stitch(StitchPlan((a, StarCycle.build([2, 3, 4])), ((3, 1),)))


@st.composite
def plans(draw):
    k = draw(st.integers(2, 5))
    shapes = [
        (draw(st.integers(3, 6)), draw(st.lists(st.integers(1, 3), max_size=2)))
        for _ in range(k)
    ]
    total = sum(length + sum(ls) for length, ls in shapes)
    labels = draw(st.permutations(range(total)))
    pos = 0
    comps = []
    for length, leaf_counts in shapes:
        cycle = labels[pos:pos + length]
        pos += length
        stars = []
        for i, m in enumerate(leaf_counts):
            stars.append((cycle[i], labels[pos:pos + m]))
            pos += m
        comps.append(StarCycle.build(cycle, stars))
    links = []
    for i in range(1, k):
        x = draw(st.sampled_from(sorted(comps[i].covered)))
        y = draw(st.sampled_from(sorted(v for sc in comps[:i] for v in sc.covered)))
        links.append((x, y))
    return StitchPlan(tuple(comps), tuple(links))


@given(plans())
def test_stitched_tree_respects_bound(plan):
    res = stitch(plan)
    g = Graph(res.tree.n, [e for sc in plan.components for e in sc.edges()] + list(plan.links))
    assert not verify_tree(g, res.tree.edges, res.bound)
    assert res.bound == len(plan.components) - 2 + sum(sc.t for sc in plan.components)


def test_part_budget():
    b = part_budget([10, 10], 20, 1)
    assert b.s_values == (1, 1) and b.t_max == (0, 0)
    b = part_budget([20, 20], 40, 5)
    assert b.s_values == (3, 3) and b.t_max == (1, 1)
    b = part_budget([30], 30, 4)
    assert b.s_values == (6,) and b.t_max == (4,)
    with pytest.warns(UserWarning):
        part_budget([2, 18], 20, 1)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        part_budget([10, 10], 20, 1)
    with pytest.raises(ValueError):
        part_budget([3, 3], 7, 1)


def test_build_star_cycle_stages():
    assert build_star_cycle(Graph.complete(6), 0).stage == "hamiltonian"
    res = build_star_cycle(KITE, 1)
    assert res.ok and res.star_cycle.t == 1 and not res.star_cycle.problems(KITE)
    fail = build_star_cycle(KITE, 0)
    assert not fail.ok and fail.uncovered
    assert not build_star_cycle(Graph.path(2), 3).ok


@given(graphs(3, 9, connected=True), st.integers(0, 2))
def test_built_star_cycles_are_valid(g, t_max):
    res = build_star_cycle(g, t_max, restarts=8)
    if res.ok:
        sc = res.star_cycle
        assert sc.t <= t_max and sc.covered == frozenset(range(g.n)) and not sc.problems(g)


@pytest.mark.parametrize(
    "g, s, status",
    [
        (Graph.path(7), 0, "found"),
        (Graph.complete(8), 0, "found"),
        (Graph(5, [(0, i) for i in range(1, 5)]), 0, "infeasible"),
        (gen_extremal(1, 3), 1, "infeasible"),
        (gen_extremal(1, 3), 2, "found"),
        (KITE, 1, "found"),
    ],
)
def test_solve_examples(g, s, status):
    res = solve(g, s)
    assert res.status == status
    if res.ok:
        assert not verify_tree(g, res.tree.edges, s)


def test_solve_without_fallbacks_can_fail():
    res = solve(gen_extremal(1, 3), 1, SolveConfig(fallback=False, oracle=False))
    assert res.status == "failed" and res.tree is None


def test_solve_input_errors():
    with pytest.raises(ValueError):
        solve(Graph(4, [(0, 1), (2, 3)]), 1)
    with pytest.raises(ValueError):
        solve(Graph.path(4), -1)


@given(graphs(1, 8, connected=True), st.integers(0, 2))
def test_solve_agrees_with_oracle(g, s):
    res = solve(g, s, SolveConfig(restarts=8))
    feasible = min_branch_tree(g).min_branches <= s
    assert res.status == ("found" if feasible else "infeasible")
    if res.ok:
        assert not verify_tree(g, res.tree.edges, s)
