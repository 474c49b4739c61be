"""Star-cycles, stitching them into spanning trees, and the solve pipeline.

A star-cycle is a cycle plus stars whose centres lie on it and whose leaves do
not. Deleting one cycle edge at a star centre leaves a tree whose branch
vertices are among the centres. Several vertex-disjoint star-cycles joined by
``k - 1`` link edges become a tree with at most ``k - 2 + sum(t_j)`` branch
vertices (``k >= 2``) once, at every join, the deleted cycle edge is taken at
the link's endpoint.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .graph import Graph, InvalidTree, SpanningTree, is_connected, verify_tree
from .hamilton import hamiltonian_path, longest_cycles
from .oracle import BNB_MAX_N, OracleError, min_branch_tree
from .partition import DESK_SCHEDULE, AlphaSchedule, robust_partition
from .rng import Rng
from .stars import HypothesisViolation, StageFailure, star_two_matching


class PlanError(ValueError):
    pass


def _e(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class StarCycle:
    cycle: tuple[int, ...]
    stars: tuple[tuple[int, tuple[int, ...]], ...] = ()

    @classmethod
    def build(cls, cycle: Sequence[int], stars=()) -> "StarCycle":
        sts = tuple(sorted((c, tuple(sorted(ls))) for c, ls in stars if ls))
        return cls(tuple(cycle), sts)

    @property
    def t(self) -> int:
        return len(self.stars)

    @property
    def covered(self) -> frozenset[int]:
        return frozenset(self.cycle) | {x for _, ls in self.stars for x in ls}

    def cycle_edges(self) -> list[tuple[int, int]]:
        c = self.cycle
        return [_e(c[i], c[(i + 1) % len(c)]) for i in range(len(c))]

    def edges(self) -> list[tuple[int, int]]:
        return self.cycle_edges() + [_e(c, x) for c, ls in self.stars for x in ls]

    def centre_of(self) -> dict[int, int]:
        return {x: c for c, ls in self.stars for x in ls}

    def relabel(self, labels: Sequence[int]) -> "StarCycle":
        return StarCycle.build(
            [labels[v] for v in self.cycle],
            [(labels[c], [labels[x] for x in ls]) for c, ls in self.stars],
        )

    def problems(self, g: Graph | None = None) -> list[str]:
        out = []
        c = self.cycle
        if len(c) < 3:
            out.append("cycle shorter than 3")
        if len(set(c)) != len(c):
            out.append("repeated cycle vertex")
        on = set(c)
        seen: set[int] = set()
        for centre, ls in self.stars:
            if centre not in on:
                out.append(f"star centre {centre} is off the cycle")
            if not ls:
                out.append(f"star at {centre} has no leaves")
            for x in ls:
                if x in on:
                    out.append(f"leaf {x} lies on the cycle")
                if x in seen:
                    out.append(f"leaf {x} used twice")
                seen.add(x)
        if len({ce for ce, _ in self.stars}) != len(self.stars):
            out.append("two stars share a centre")
        if g is not None:
            for u, v in self.edges():
                if not (0 <= u < g.n and 0 <= v < g.n and g.has_edge(u, v)):
                    out.append(f"edge ({u}, {v}) is not in the graph")
        return out


def _cut_edge(sc: StarCycle, at: int, prefer: set[int] = frozenset()) -> tuple[int, int]:
    """Cycle edge at cycle vertex ``at``; the one leading into ``prefer`` if any."""
    c = sc.cycle
    i = c.index(at)
    nxt, prv = c[(i + 1) % len(c)], c[i - 1]
    if prv in prefer and nxt not in prefer:
        return _e(at, prv)
    return _e(at, nxt)


def star_cycle_tree_edges(sc: StarCycle, at: int | None = None) -> list[tuple[int, int]]:
    if at is None:
        at = sc.stars[0][0] if sc.stars else sc.cycle[0]
    drop = _cut_edge(sc, at)
    return sorted(e for e in sc.edges() if e != drop)


def star_cycle_to_tree(sc: StarCycle) -> SpanningTree:
    """Spanning tree of the covered vertices (which must be ``0..n-1``)."""
    bad = sc.problems()
    if bad:
        raise PlanError("; ".join(bad))
    n = len(sc.covered)
    if sc.covered != frozenset(range(n)):
        raise PlanError("covered vertices are not 0..n-1; relabel first")
    return SpanningTree.from_edges(n, star_cycle_tree_edges(sc))


# ---------------------------------------------------------------------------
# Stitching
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StitchPlan:
    components: tuple[StarCycle, ...]
    links: tuple[tuple[int, int], ...]

    def problems(self) -> list[str]:
        out = []
        k = len(self.components)
        if k == 0:
            return ["no components"]
        if len(self.links) != k - 1:
            out.append(f"{k} components need {k - 1} links, got {len(self.links)}")
        seen: set[int] = set()
        for i, sc in enumerate(self.components):
            out += [f"component {i}: {p}" for p in sc.problems()]
            if seen & sc.covered:
                out.append(f"component {i} overlaps an earlier one")
            seen |= sc.covered
        before: set[int] = set(self.components[0].covered)
        for i, (u, v) in enumerate(self.links[: k - 1]):
            nxt = self.components[i + 1].covered
            if not ((u in nxt and v in before) or (v in nxt and u in before)):
                out.append(f"link {i} ({u}, {v}) does not join component {i + 1} to the earlier ones")
            before |= nxt
        return out


@dataclass(frozen=True)
class StitchResult:
    tree: SpanningTree
    achieved: tuple[bool, ...]
    bound: int


def stitch_bound(ts: Sequence[int]) -> int:
    """Branch-vertex bound for stitched star-cycles with ``t_j`` stars each.

    ``k - 2 + sum(t)`` for ``k >= 2`` components. A single star-cycle gets
    ``t_1``, since the general formula would give ``-1`` for a plain cycle.
    """
    return ts[0] if len(ts) == 1 else len(ts) - 2 + sum(ts)


def stitch(plan: StitchPlan) -> StitchResult:
    """Join the components along the links into one tree.

    Each component loses one cycle edge. For ``H_1`` it sits at the endpoint
    of ``e_1``; for ``H_{i+1}`` at the endpoint of ``e_i``. When that endpoint
    is a leaf the edge is taken at its centre instead (the join is then not
    "achieved"). Between the two cycle edges at an endpoint, the one whose
    far end is a later attachment point is preferred, which saves a branch
    vertex there.
    """
    bad = plan.problems()
    if bad:
        raise PlanError("; ".join(bad))
    comps = plan.components
    k = len(comps)
    n = sum(len(sc.covered) for sc in comps)
    allv = frozenset().union(*(sc.covered for sc in comps))
    if allv != frozenset(range(n)):
        raise PlanError("components must cover exactly 0..N-1")
    entry: list[int | None] = [None] * k
    attach: list[set[int]] = [set() for _ in range(k)]
    before = set(comps[0].covered)
    for i, (u, v) in enumerate(plan.links):
        x, y = (u, v) if u in comps[i + 1].covered else (v, u)
        entry[i + 1] = x
        owner = next(j for j in range(i + 1) if y in comps[j].covered)
        attach[owner].add(y)
        before |= comps[i + 1].covered
    if k > 1:
        u, v = plan.links[0]
        entry[0] = u if u in comps[0].covered else v
    edges: list[tuple[int, int]] = []
    achieved = []
    for j, sc in enumerate(comps):
        x = entry[j]
        on = set(sc.cycle)
        if x is not None and x in on:
            drop = _cut_edge(sc, x, attach[j])
            achieved.append(True)
        else:
            if x is not None:
                at = sc.centre_of()[x]
            else:
                later = [a for a in sc.cycle if a in attach[j]]
                at = later[0] if later else (sc.stars[0][0] if sc.stars else sc.cycle[0])
            drop = _cut_edge(sc, at, attach[j])
            achieved.append(x is None)
        edges += [e for e in sc.edges() if e != drop]
    edges += [_e(u, v) for u, v in plan.links]
    tree = SpanningTree.from_edges(n, edges)
    return StitchResult(tree, tuple(achieved[1:]), stitch_bound([sc.t for sc in comps]))


# ---------------------------------------------------------------------------
# Budgets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PartBudget:
    s_values: tuple[int, ...]
    t_max: tuple[int, ...]


def part_budget(part_sizes: Sequence[int], n: int, s: int) -> PartBudget:
    """``s_j = floor((s+3)|V_j| / (n+1))`` and star budgets per part.

    ``t_max`` is 0 when ``s_j <= 1`` and ``max(1, s_j - 2)`` otherwise.
    """
    if any(x <= 0 for x in part_sizes) or sum(part_sizes) != n:
        raise ValueError(f"part sizes {list(part_sizes)} do not partition {n} vertices")
    if s < 0:
        raise ValueError("s must be non-negative")
    small = [x for x in part_sizes if x * (s + 3) <= n]
    if small:
        warnings.warn(f"parts of size {small} are at most n/(s+3); their s_j is 0", stacklevel=2)
    sv = tuple((s + 3) * x // (n + 1) for x in part_sizes)
    tm = tuple(0 if v <= 1 else max(1, v - 2) for v in sv)
    return PartBudget(sv, tm)


# ---------------------------------------------------------------------------
# Building star-cycles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BuildResult:
    star_cycle: StarCycle | None
    stage: str
    uncovered: tuple[int, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.star_cycle is not None


def _absorb(g: Graph, cycle: list[int]) -> list[int]:
    """Insert off-cycle vertices between two consecutive cycle neighbours."""
    cycle = list(cycle)
    changed = True
    while changed:
        changed = False
        on = set(cycle)
        for v in range(g.n):
            if v in on:
                continue
            nb = g.neighbors(v)
            for i in range(len(cycle)):
                a, b = cycle[i], cycle[(i + 1) % len(cycle)]
                if a in nb and b in nb:
                    cycle.insert(i + 1, v)
                    on.add(v)
                    changed = True
                    break
    return cycle


def _attach_leaves(g: Graph, cycle: list[int], t_max: int) -> tuple[StarCycle | None, list[int]]:
    """Greedy set cover of the off-cycle vertices by at most ``t_max`` centres."""
    on = set(cycle)
    rest = {v for v in range(g.n) if v not in on}
    stars: dict[int, list[int]] = {}
    while rest:
        best = None
        for c in cycle:
            gain = len(g.neighbors(c) & rest)
            if gain and (best is None or gain > best[0] or (gain == best[0] and c in stars and best[1] not in stars)):
                best = (gain, c)
        if best is None:
            break
        c = best[1]
        if c not in stars and len(stars) >= t_max:
            break
        take = sorted(g.neighbors(c) & rest)
        stars.setdefault(c, []).extend(take)
        rest -= set(take)
    if rest or len(stars) > t_max:
        return None, sorted(rest)
    return StarCycle.build(cycle, stars.items()), []


def _seeded(g: Graph, t_max: int, seed: int, restarts: int) -> StarCycle | None:
    """Star-2-matching seeding: strip its leaves and look for a Hamiltonian cycle."""
    try:
        sm = star_two_matching(g, t_max)
    except (StageFailure, HypothesisViolation):
        return None
    leaves = {x for _, ls in sm.stars for x in ls}
    if not leaves:
        return None
    h, labels = g.remove_vertices(leaves)
    if h.n < 3:
        return None
    cycles = longest_cycles(h, seed, restarts)
    if not cycles or len(cycles[0]) != h.n:
        return None
    cycle = [labels[v] for v in cycles[0]]
    return StarCycle.build(cycle, sm.stars)


def build_star_cycle(g: Graph, t_max: int, seed: int = 0, restarts: int = 32) -> BuildResult:
    """Spanning star-cycle with at most ``t_max`` stars, or a failure value.

    Stages, in order: Hamiltonian cycle search; longest cycles with absorbed
    vertices and greedily attached leaves; star-2-matching seeding. Every
    returned star-cycle has been checked against ``g``.
    """
    if g.n < 3:
        return BuildResult(None, "none", tuple(range(g.n)), ("fewer than 3 vertices",))
    cycles = longest_cycles(g, seed, restarts)
    if cycles and len(cycles[0]) == g.n:
        sc = StarCycle.build(cycles[0])
        if not sc.problems(g):
            return BuildResult(sc, "hamiltonian")
    best_left: list[int] = list(range(g.n))
    for cyc in cycles[:8]:
        cyc = _absorb(g, cyc)
        if len(cyc) == g.n:
            return BuildResult(StarCycle.build(cyc), "hamiltonian")
        sc, left = _attach_leaves(g, cyc, t_max)
        if sc is not None and not sc.problems(g):
            return BuildResult(sc, "leaf-attachment")
        if left and len(left) < len(best_left):
            best_left = left
    sc = _seeded(g, t_max, seed, restarts)
    if sc is not None and sc.t <= t_max and sc.covered == frozenset(range(g.n)) and not sc.problems(g):
        return BuildResult(sc, "star-2-matching")
    return BuildResult(None, "none", tuple(best_left), (f"no spanning star-cycle with t <= {t_max} found",))


# ---------------------------------------------------------------------------
# Solve
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolveConfig:
    seed: int = 0
    restarts: int = 32
    fallback: bool = True
    oracle: bool = True
    oracle_max_n: int = 30
    exact_partition_max_n: int = 16
    schedule: AlphaSchedule = DESK_SCHEDULE


@dataclass
class SolveResult:
    status: str  # "found", "infeasible" or "failed"
    tree: SpanningTree | None
    stage: str
    s: int
    trace: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == "found"


def _bfs_tree(g: Graph) -> list[tuple[int, int]]:
    seen = {0}
    out = []
    q = deque([0])
    while q:
        v = q.popleft()
        for w in sorted(g.neighbors(v)):
            if w not in seen:
                seen.add(w)
                out.append(_e(v, w))
                q.append(w)
    return out


def _plan_links(g: Graph, comps: list[StarCycle], root: int) -> StitchPlan | None:
    """Order components by BFS from ``root`` over the contraction multigraph."""
    k = len(comps)
    owner = {v: j for j, sc in enumerate(comps) for v in sc.covered}
    on_cycle = {v for sc in comps for v in sc.cycle}
    order = [root]
    done = {root}
    links = []
    used: set[int] = set()
    while len(order) < k:
        best = None
        for j in order:
            for y in sorted(comps[j].covered):
                for x in sorted(g.neighbors(y)):
                    o = owner[x]
                    if o in done:
                        continue
                    key = (x not in on_cycle, y not in on_cycle, y in used, order.index(j), x, y)
                    if best is None or key < best[0]:
                        best = (key, o, x, y)
        if best is None:
            return None
        _, o, x, y = best
        order.append(o)
        done.add(o)
        used.update((x, y))
        links.append(_e(x, y))
    return StitchPlan(tuple(comps[j] for j in order), tuple(links))


def _pipeline(g: Graph, s: int, cfg: SolveConfig, trace: dict) -> list[tuple[int, int]] | None:
    n = g.n
    r = s + 3
    gamma = max(Fraction(g.min_degree(), n) - Fraction(1, r), Fraction(0))
    mode = "exact" if n <= cfg.exact_partition_max_n else "heuristic"
    rp = robust_partition(g, r, gamma, mode, cfg.schedule, cfg.seed)
    trace["parts"] = [list(p) for p in rp.parts]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        budget = part_budget([len(p) for p in rp.parts], n, s)
    trace["budget"] = {"s": list(budget.s_values), "t_max": list(budget.t_max)}
    if caught:
        trace["warnings"] = [str(w.message) for w in caught]
    root = Rng(cfg.seed)
    comps = []
    for j, part in enumerate(rp.parts):
        sub, labels = g.induced(part)
        res = build_star_cycle(sub, budget.t_max[j], root.spawn(j).raw(), cfg.restarts)
        if not res.ok:
            trace["failed_part"] = j
            return None
        comps.append(res.star_cycle.relabel(labels))
    best = None
    for start in range(len(comps)):
        plan = _plan_links(g, comps, start)
        if plan is None:
            continue
        edges = list(stitch(plan).tree.edges)
        b = SpanningTree.from_edges(n, edges).branch_count
        if best is None or b < best[0]:
            best = (b, edges)
    return best[1] if best else None


def solve(g: Graph, s: int, config: SolveConfig | None = None) -> SolveResult:
    """Spanning tree with at most ``s`` branch vertices, or a failure report.

    Tries the partition-and-stitch pipeline, then (with ``fallback``) a
    star-cycle or Hamiltonian path on the whole graph, then (with ``oracle``)
    the exact solver. Every returned tree passes :func:`verify_tree`.
    """
    cfg = config or SolveConfig()
    if s < 0:
        raise ValueError("s must be non-negative")
    if not is_connected(g):
        raise ValueError("graph is disconnected")
    trace: dict = {}

    def accept(edges, stage: str) -> SolveResult | None:
        if edges is None:
            return None
        problems = verify_tree(g, edges, s)
        if problems:
            trace.setdefault("rejected", []).append({"stage": stage, "problems": problems})
            return None
        return SolveResult("found", SpanningTree.from_edges(g.n, edges), stage, s, trace)

    if g.n < 4:
        return accept(_bfs_tree(g), "trivial") or SolveResult("failed", None, "trivial", s, trace)
    try:
        out = accept(_pipeline(g, s, cfg, trace), "pipeline")
    except (InvalidTree, PlanError) as exc:
        trace["pipeline_error"] = str(exc)
        out = None
    if out:
        return out
    if cfg.fallback:
        res = build_star_cycle(g, s, cfg.seed, cfg.restarts)
        if res.ok:
            out = accept(star_cycle_tree_edges(res.star_cycle), "direct")
            if out:
                return out
        path = hamiltonian_path(g, cfg.seed)
        if path is not None:
            out = accept([_e(a, b) for a, b in zip(path, path[1:])], "direct")
            if out:
                return out
    if cfg.oracle and g.n <= cfg.oracle_max_n and g.n <= BNB_MAX_N:
        try:
            res = min_branch_tree(g, limit=s)
        except OracleError as exc:
            trace["oracle_error"] = str(exc)
        else:
            trace["oracle"] = {"status": res.status, "lower": res.lower, "upper": res.upper}
            if res.status == "at_most":
                out = accept(list(res.witness.edges), "oracle")
                if out:
                    return out
            elif res.status == "more_than":
                return SolveResult("infeasible", None, "oracle", s, trace)
    return SolveResult("failed", None, "none", s, trace)
