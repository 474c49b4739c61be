"""Maximum matchings, Gallai-Edmonds sets, fractional matchings and 2-matchings."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .graph import Graph

HALF = Fraction(1, 2)


class NotBasic(ValueError):
    """Fractional matching whose half-weight edges are not disjoint odd cycles."""


# ---------------------------------------------------------------------------
# Maximum cardinality matching (Edmonds)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Matching:
    edges: tuple[tuple[int, int], ...]
    saturated: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.edges)

    def mate(self, n: int) -> list[int]:
        out = [-1] * n
        for u, v in self.edges:
            out[u], out[v] = v, u
        return out

    @classmethod
    def from_mate(cls, mate: Sequence[int]) -> "Matching":
        edges = tuple(sorted((v, w) for v, w in enumerate(mate) if w > v))
        return cls(edges, frozenset(x for e in edges for x in e))


def _augmenting_endpoint(adj, match, root, alive):
    """Edmonds search from ``root``; returns ``(end, parent)`` with end=-1 if none."""
    n = len(adj)
    used = [False] * n
    parent = [-1] * n
    base = list(range(n))
    used[root] = True
    queue = deque([root])

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if match[a] == -1:
                break
            a = parent[match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[match[b]]

    def mark(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = blossom[base[match[v]]] = True
            parent[v] = child
            child = match[v]
            v = parent[match[v]]

    while queue:
        v = queue.popleft()
        for to in adj[v]:
            if not alive[to] or base[v] == base[to] or match[v] == to:
                continue
            if to == root or (match[to] != -1 and parent[match[to]] != -1):
                cur = lca(v, to)
                blossom = [False] * n
                mark(v, cur, to, blossom)
                mark(to, cur, v, blossom)
                for i in range(n):
                    if blossom[base[i]]:
                        base[i] = cur
                        if not used[i]:
                            used[i] = True
                            queue.append(i)
            elif parent[to] == -1:
                parent[to] = v
                if match[to] == -1:
                    return to, parent
                used[match[to]] = True
                queue.append(match[to])
    return -1, parent


def _flip(match, parent, end) -> None:
    v = end
    while v != -1:
        pv = parent[v]
        nxt = match[pv]
        match[v] = pv
        match[pv] = v
        v = nxt


def _max_mate(g: Graph, alive: Sequence[bool] | None = None) -> list[int]:
    n = g.n
    alive = [True] * n if alive is None else list(alive)
    adj = [sorted(g.neighbors(v)) for v in range(n)]
    match = [-1] * n
    for u, v in g.edges():
        if alive[u] and alive[v] and match[u] == -1 and match[v] == -1:
            match[u], match[v] = v, u
    for root in range(n):
        if alive[root] and match[root] == -1:
            end, parent = _augmenting_endpoint(adj, match, root, alive)
            if end != -1:
                _flip(match, parent, end)
    return match


def max_matching(g: Graph) -> Matching:
    """Maximum-cardinality matching; greedy lexicographic start then blossom augmentation."""
    return Matching.from_mate(_max_mate(g))


def matching_number(g: Graph) -> int:
    return sum(1 for v, w in enumerate(_max_mate(g)) if w > v)


# ---------------------------------------------------------------------------
# Gallai-Edmonds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GallaiEdmonds:
    """``A``: vertices missed by some maximum matching; ``A1``: isolated vertices of ``g[A]``.

    ``neighbors`` is ``N(A) - A`` and ``rest`` the remaining vertices.
    """

    A: frozenset[int]
    A1: frozenset[int]
    neighbors: frozenset[int]
    rest: frozenset[int]
    matching: Matching


def gallai_edmonds_sets(g: Graph) -> GallaiEdmonds:
    """Decide ``v in A`` by the deletion test ``nu(g - v) == nu(g)``.

    With a maximum matching ``M`` fixed, ``nu(g - v) == nu(g)`` for a matched
    ``v`` exactly when ``M - v`` has an augmenting path in ``g - v``, which must
    start at the former mate of ``v``; one Edmonds search per vertex decides it.
    """
    n = g.n
    match = _max_mate(g)
    adj = [sorted(g.neighbors(v)) for v in range(n)]
    in_a = [match[v] == -1 for v in range(n)]
    alive = [True] * n
    for v in range(n):
        u = match[v]
        if u == -1:
            continue
        trial = list(match)
        trial[u] = trial[v] = -1
        alive[v] = False
        end, _ = _augmenting_endpoint(adj, trial, u, alive)
        alive[v] = True
        in_a[v] = end != -1
    a = frozenset(v for v in range(n) if in_a[v])
    a1 = frozenset(v for v in a if not (g.neighbors(v) & a))
    nb = frozenset(g.neighborhood(a) - a)
    rest = frozenset(range(n)) - a - nb
    return GallaiEdmonds(a, a1, nb, rest, Matching.from_mate(match))


# ---------------------------------------------------------------------------
# Fractional matchings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FractionalMatching:
    """Edge weights in {0, 1/2, 1}; zero-weight edges are omitted."""

    n: int
    weight: Mapping[tuple[int, int], Fraction]

    def __post_init__(self):
        for e, w in self.weight.items():
            if w not in (0, HALF, 1):
                raise ValueError(f"weight {w} on {e} is not 0, 1/2 or 1")
        if any(w > 1 for w in self.vertex_weight()):
            raise ValueError("vertex weight exceeds 1")

    @classmethod
    def of(cls, n: int, weights: Mapping[tuple[int, int], Fraction | int]) -> "FractionalMatching":
        clean = {(min(e), max(e)): Fraction(w) for e, w in weights.items() if w}
        return cls(n, clean)

    def vertex_weight(self) -> list[Fraction]:
        out = [Fraction(0)] * self.n
        for (u, v), w in self.weight.items():
            out[u] += w
            out[v] += w
        return out

    def total(self) -> Fraction:
        return sum(self.weight.values(), Fraction(0))

    def _half_components(self) -> list[tuple[list[int], bool]]:
        """Components of the half-weight subgraph as ``(vertex order, is_cycle)``.

        Paths are walked from their smaller endpoint, cycles from their smallest vertex.
        """
        adj: dict[int, list[int]] = {}
        for (u, v), w in self.weight.items():
            if w == HALF:
                adj.setdefault(u, []).append(v)
                adj.setdefault(v, []).append(u)
        seen: set[int] = set()
        comps = []
        for start in sorted(adj):
            if start in seen:
                continue
            members = _component(adj, start)
            ends = sorted(v for v in members if len(adj[v]) == 1)
            first = ends[0] if ends else min(members)
            order = [first]
            on_walk = {first}
            cur = first
            while True:
                nxt = [w for w in sorted(adj[cur]) if w not in on_walk]
                if not nxt:
                    break
                cur = nxt[0]
                order.append(cur)
                on_walk.add(cur)
            seen |= members
            comps.append((order, not ends))
        return comps

    def is_basic(self) -> bool:
        if any(w == HALF for w in self.vertex_weight()):
            return False
        return all(cyc and len(order) % 2 == 1 for order, cyc in self._half_components())


def _component(adj: Mapping[int, list[int]], start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def max_fractional_matching(g: Graph) -> FractionalMatching:
    """Maximum fractional matching via a maximum matching of the bipartite double cover.

    Edge ``uv`` becomes ``u'v''`` and ``v'u''``; the weight of ``uv`` is half the
    number of its two copies used.
    """
    n = g.n
    right_adj = [sorted(g.neighbors(v)) for v in range(n)]
    mate_r = bipartite_max_matching(range(n), right_adj, n)
    weights: dict[tuple[int, int], Fraction] = {}
    for r, left in enumerate(mate_r):
        if left != -1:
            e = (min(left, r), max(left, r))
            weights[e] = weights.get(e, Fraction(0)) + HALF
    return FractionalMatching.of(n, weights)


def basify(f: FractionalMatching, g: Graph | None = None) -> FractionalMatching:
    """Round half-weight paths and even cycles to alternating 0/1; keep odd cycles."""
    if g is not None:
        for u, v in f.weight:
            if not g.has_edge(u, v):
                raise ValueError(f"edge ({u}, {v}) carries weight but is not in the graph")
    weights = {e: w for e, w in f.weight.items() if w == 1}
    for order, is_cycle in f._half_components():
        if is_cycle and len(order) % 2 == 1:
            for i, v in enumerate(order):
                w = order[(i + 1) % len(order)]
                weights[(min(v, w), max(v, w))] = HALF
            continue
        k = len(order) if is_cycle else len(order) - 1
        for i in range(0, k, 2):
            v, w = order[i], order[(i + 1) % len(order)]
            weights[(min(v, w), max(v, w))] = Fraction(1)
    return FractionalMatching.of(f.n, weights)


# ---------------------------------------------------------------------------
# 2-matchings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwoMatching:
    """Vertex-disjoint single edges and odd cycles (cycles as vertex sequences)."""

    edges: tuple[tuple[int, int], ...]
    odd_cycles: tuple[tuple[int, ...], ...]
    saturated: frozenset[int]

    @classmethod
    def build(cls, edges: Iterable[tuple[int, int]], cycles: Iterable[Sequence[int]]) -> "TwoMatching":
        es = tuple(sorted((min(u, v), max(u, v)) for u, v in edges))
        cs = tuple(sorted(_canonical_cycle(c) for c in cycles))
        covered = [x for e in es for x in e] + [x for c in cs for x in c]
        if len(covered) != len(set(covered)):
            raise ValueError("2-matching components overlap")
        if any(len(c) < 3 or len(c) % 2 == 0 for c in cs):
            raise ValueError("2-matching cycles must be odd with length >= 3")
        return cls(es, cs, frozenset(covered))

    @property
    def size(self) -> Fraction:
        return Fraction(len(self.saturated), 2)

    @property
    def cycle_vertex_count(self) -> int:
        return sum(len(c) for c in self.odd_cycles)

    def all_edges(self) -> list[tuple[int, int]]:
        out = list(self.edges)
        for c in self.odd_cycles:
            out.extend((min(a, b), max(a, b)) for a, b in zip(c, c[1:] + c[:1]))
        return out

    def unsaturated(self, n: int) -> frozenset[int]:
        return frozenset(range(n)) - self.saturated


def _canonical_cycle(c: Sequence[int]) -> tuple[int, ...]:
    c = list(c)
    i = c.index(min(c))
    c = c[i:] + c[:i]
    if len(c) > 2 and c[-1] < c[1]:
        c = [c[0]] + c[1:][::-1]
    return tuple(c)


def fractional_to_two_matching(f: FractionalMatching) -> TwoMatching:
    if not f.is_basic():
        raise NotBasic("half-weight edges must form vertex-disjoint odd cycles")
    edges = [e for e, w in f.weight.items() if w == 1]
    cycles = [order for order, _ in f._half_components()]
    return TwoMatching.build(edges, cycles)


def _perfect_mate(g: Graph, vertices: Iterable[int]) -> dict[int, int]:
    sub, labels = g.induced(vertices)
    mate = _max_mate(sub)
    if any(w == -1 for w in mate):
        raise RuntimeError("expected a perfect matching")
    return {labels[i]: labels[w] for i, w in enumerate(mate)}


def _alternating_odd_cycle(g: Graph, comp_set: set[int], v: int) -> list[int] | None:
    """Shortest odd cycle through ``v`` alternating with a perfect matching of ``comp - v``.

    BFS over vertices ``w`` reached as ``v - u_1 = w_1 - u_2 = w_2 ...`` where
    ``=`` are matching edges; it closes when some ``w`` is adjacent to ``v``.
    Plain BFS can miss paths that need blossoms, so ``None`` is possible.
    """
    mate = _perfect_mate(g, comp_set - {v})
    prev: dict[int, int] = {}
    seen = {v}
    queue: deque[int] = deque()
    for u in sorted(g.neighbors(v) & comp_set):
        w = mate[u]
        if u not in seen and w not in seen:
            seen.update((u, w))
            prev[w] = -1
            queue.append(w)
    while queue:
        w = queue.popleft()
        if v in g.neighbors(w):
            chain = []
            while w != -1:
                chain.append(w)
                w = prev[w]
            cycle = [v]
            for x in reversed(chain):
                cycle.extend((mate[x], x))
            return cycle
        for u in sorted(g.neighbors(w) & comp_set):
            x = mate[u]
            if u in seen or x in seen:
                continue
            seen.update((u, x))
            prev[x] = w
            queue.append(x)
    return None


def _perfect_cover(g: Graph, comp: Sequence[int]) -> tuple[list[list[int]], list[tuple[int, int]]]:
    """Perfect 2-matching of a factor-critical component: ``(odd cycles, edges)``.

    Prefers a single short alternating odd cycle; falls back to the basified
    maximum fractional matching of the component.
    """
    comp_set = set(comp)
    best = None
    for v in sorted(comp):
        cycle = _alternating_odd_cycle(g, comp_set, v)
        if cycle is not None and (best is None or len(cycle) < len(best)):
            best = cycle
            if len(best) == 3:
                break
    if best is not None:
        mate = _perfect_mate(g, comp_set - set(best))
        return [best], [(a, b) for a, b in mate.items() if a < b]
    sub, labels = g.induced(comp)
    tm = fractional_to_two_matching(basify(max_fractional_matching(sub)))
    if len(tm.saturated) != sub.n:
        raise RuntimeError("component has no perfect 2-matching")
    return (
        [[labels[x] for x in c] for c in tm.odd_cycles],
        [(labels[a], labels[b]) for a, b in tm.edges],
    )


def max_two_matching(g: Graph, ge: GallaiEdmonds | None = None) -> TwoMatching:
    """Maximum 2-matching built on the Gallai-Edmonds structure.

    ``rest`` is perfectly matched; every vertex of ``N(A) - A`` is matched into a
    distinct component of ``g[A]``, maximising first the number of isolated
    vertices of ``g[A]`` reached (this maximises saturation) and then the total
    odd-cycle length avoided; components not reached are covered by an odd cycle
    plus a perfect matching. Unsaturated vertices are therefore isolated in ``g[A]``.
    """
    if ge is None:
        ge = gallai_edmonds_sets(g)
    comps = g.components(ge.A)
    singles = [len(c) == 1 for c in comps]
    cover = {i: _perfect_cover(g, c) for i, c in enumerate(comps) if len(c) > 1}
    owner = {v: i for i, c in enumerate(comps) for v in c}
    left = sorted(ge.neighbors)
    edges: list[tuple[int, int]] = []
    cycles: list[list[int]] = []
    hit: dict[int, int] = {}
    if left:
        big = g.n + 1
        forbid = 10 * big * big
        cost = np.full((len(left), len(comps)), forbid, dtype=np.int64)
        for r, a in enumerate(left):
            for u in g.neighbors(a):
                if u in owner:
                    c = owner[u]
                    cost[r, c] = -big if singles[c] else -sum(map(len, cover[c][0]))
        rows, cols = linear_sum_assignment(cost)
        for r, c in zip(rows, cols):
            if cost[r, c] >= forbid:
                raise RuntimeError("neighbours of A cannot be matched into distinct components")
            a = left[r]
            k = min(g.neighbors(a) & set(comps[c]))
            edges.append((a, k))
            hit[c] = k
    for i, comp in enumerate(comps):
        if i in hit:
            if len(comp) > 1:
                mate = _perfect_mate(g, set(comp) - {hit[i]})
                edges.extend((a, b) for a, b in mate.items() if a < b)
        elif len(comp) > 1:
            cs, rest = cover[i]
            cycles.extend(cs)
            edges.extend(rest)
    if ge.rest:
        mate = _perfect_mate(g, ge.rest)
        edges.extend((a, b) for a, b in mate.items() if a < b)
    return TwoMatching.build(edges, cycles)


def pulleyblank_violations(g: Graph, tm: TwoMatching, ge: GallaiEdmonds | None = None) -> list[str]:
    """Check: unsaturated vertices lie in ``A1``; 2-matching edges at ``A1`` form a
    matching saturating ``N(A1)``."""
    if ge is None:
        ge = gallai_edmonds_sets(g)
    problems = []
    stray = sorted(tm.unsaturated(g.n) - ge.A1)
    if stray:
        problems.append(f"unsaturated vertices outside A1: {stray}")
    at_a1 = [e for e in tm.all_edges() if e[0] in ge.A1 or e[1] in ge.A1]
    ends = [x for e in at_a1 for x in e]
    if len(ends) != len(set(ends)):
        problems.append("edges at A1 do not form a matching")
    missing = sorted(g.neighborhood(ge.A1) - set(ends))
    if missing:
        problems.append(f"N(A1) vertices not matched into A1: {missing}")
    return problems


# ---------------------------------------------------------------------------
# Bipartite matching helper
# ---------------------------------------------------------------------------

def bipartite_max_matching(
    left: Iterable[int],
    adj: Sequence[Sequence[int]] | Mapping[int, Sequence[int]],
    n_right: int | None = None,
    mate_right: dict[int, int] | list[int] | None = None,
) -> list[int] | dict[int, int]:
    """Kuhn's augmenting-path matching; returns the right-side mate map.

    ``adj[l]`` lists the right neighbours of left vertex ``l`` (tried in the
    given order). An initial ``mate_right`` is extended, never shrunk: matched
    right vertices stay matched.
    """
    if mate_right is None:
        mate_right = [-1] * n_right if n_right is not None else {}
    if isinstance(mate_right, list):
        get = mate_right.__getitem__
        matched_left = {x for x in mate_right if x != -1}
    else:
        get = lambda r: mate_right.get(r, -1)  # noqa: E731
        matched_left = set(mate_right.values())

    def try_left(l: int, visited: set) -> bool:
        for r in adj[l]:
            if r in visited:
                continue
            visited.add(r)
            cur = get(r)
            if cur == -1 or try_left(cur, visited):
                mate_right[r] = l
                return True
        return False

    for l in left:
        if l not in matched_left:
            try_left(l, set())
    return mate_right
