"""Exact oracles for small graphs.

* :func:`min_branch_tree`: minimum number of branch vertices over all spanning
  trees, by branch-and-bound (default) or by enumerating every spanning tree.
* :func:`spanning_tree_count`: matrix-tree theorem with fraction-free
  elimination, used to cross-check the enumerators.
* :func:`enumerate_star_two_matchings`: every (spanning) t-star-2-matching.
* :func:`fractional_matching_number`: fractional Tutte-Berge formula by subset
  enumeration, independent of the matching code.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator

import numpy as np

from .graph import Graph, SpanningTree, is_connected
from .hamilton import hamiltonian_path

EXHAUSTIVE_MAX_N = 10
BNB_MAX_N = 40
TREE_CAP = 5_000_000


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    """Outcome of :func:`min_branch_tree`.

    ``status`` is ``"exact"`` (``min_branches`` known), ``"at_most"`` (a
    witness with ``upper`` branch vertices, at most the requested limit) or
    ``"more_than"`` (``lower`` proven, exceeding the limit).
    """

    status: str
    lower: int
    upper: int | None
    witness: SpanningTree | None
    explored: int
    method: str

    @property
    def min_branches(self) -> int | None:
        return self.lower if self.status == "exact" else None


# ---------------------------------------------------------------------------
# Matrix-tree count
# ---------------------------------------------------------------------------

def bareiss_determinant(matrix: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    a = [row[:] for row in matrix]
    k = len(a)
    if k == 0:
        return 1
    sign = 1
    prev = 1
    for i in range(k - 1):
        if a[i][i] == 0:
            swap = next((r for r in range(i + 1, k) if a[r][i] != 0), None)
            if swap is None:
                return 0
            a[i], a[swap] = a[swap], a[i]
            sign = -sign
        for r in range(i + 1, k):
            for c in range(i + 1, k):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return sign * a[k - 1][k - 1]


def spanning_tree_count(g: Graph) -> int:
    if g.n <= 1:
        return 1
    lap = [[0] * g.n for _ in range(g.n)]
    for u, v in g.edges():
        lap[u][v] -= 1
        lap[v][u] -= 1
        lap[u][u] += 1
        lap[v][v] += 1
    return bareiss_determinant([row[1:] for row in lap[1:]])


# ---------------------------------------------------------------------------
# Spanning-tree enumeration
# ---------------------------------------------------------------------------

def enumerate_spanning_trees(g: Graph) -> Iterator[tuple[tuple[int, int], ...]]:
    """All spanning trees by deletion/contraction over the sorted edge list."""
    n = g.n
    edges = list(g.edges())
    if n <= 1:
        yield ()
        return
    if not is_connected(g):
        return
    comp = list(range(n))
    chosen: list[tuple[int, int]] = []

    def reachable_without(i: int) -> bool:
        # Does chosen + edges[i+1:] still connect everything?
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        groups = n
        for u, v in chosen + edges[i + 1:]:
            a, b = find(u), find(v)
            if a != b:
                parent[a] = b
                groups -= 1
        return groups == 1

    def rec(i: int) -> Iterator[tuple[tuple[int, int], ...]]:
        if len(chosen) == n - 1:
            yield tuple(chosen)
            return
        if i == len(edges):
            return
        u, v = edges[i]
        cu, cv = comp[u], comp[v]
        if cu != cv:
            moved = [x for x in range(n) if comp[x] == cv]
            for x in moved:
                comp[x] = cu
            chosen.append((u, v))
            yield from rec(i + 1)
            chosen.pop()
            for x in moved:
                comp[x] = cv
        if reachable_without(i):
            yield from rec(i + 1)

    yield from rec(0)


def frontier_spanning_trees(g: Graph) -> Iterator[tuple[tuple[int, int], ...]]:
    """Second, independent enumerator: grow from vertex 0 by frontier edges.

    At each step the lowest frontier edge is either taken or forbidden, so every
    spanning tree is produced exactly once.
    """
    n = g.n
    if n <= 1:
        yield ()
        return
    forbidden: set[tuple[int, int]] = set()
    tree: list[tuple[int, int]] = []
    inside = {0}

    def rec() -> Iterator[tuple[tuple[int, int], ...]]:
        if len(inside) == n:
            yield tuple(sorted(tree))
            return
        frontier = sorted(
            (min(u, v), max(u, v))
            for u in inside
            for v in g.neighbors(u)
            if v not in inside and (min(u, v), max(u, v)) not in forbidden
        )
        if not frontier:
            return
        e = frontier[0]
        new = e[1] if e[0] in inside else e[0]
        inside.add(new)
        tree.append(e)
        yield from rec()
        tree.pop()
        inside.discard(new)
        forbidden.add(e)
        yield from rec()
        forbidden.discard(e)

    yield from rec()


def _branches_of(n: int, edges) -> int:
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return sum(1 for d in deg if d >= 3)


# ---------------------------------------------------------------------------
# Branch-and-bound
# ---------------------------------------------------------------------------

def _popcount(x: int) -> int:
    return bin(x).count("1")


def _connected_masks(adj: list[int], n: int) -> bool:
    full = (1 << n) - 1
    seen = frontier = 1
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= adj[low.bit_length() - 1]
            f ^= low
        frontier = nxt & ~seen
        seen |= frontier
    return seen == full


def _degree_floor(adj: list[int], tadj: list[int], n: int) -> list[int]:
    """Lower bound on the final tree degree of every vertex.

    Every component of ``G' - v`` must receive a tree edge from ``v``. Tree
    edges already chosen at ``v`` serve the components holding those tree
    neighbours; each remaining component needs one more. Assumes ``G'`` is
    connected.
    """
    disc = [-1] * n
    low = [0] * n
    size = [1] * n
    parent = [-1] * n
    kids: list[list[int]] = [[] for _ in range(n)]
    disc[0] = 0
    counter = 1
    stack = [(0, adj[0])]
    while stack:
        v, rest = stack[-1]
        if rest:
            bit = rest & -rest
            stack[-1] = (v, rest ^ bit)
            w = bit.bit_length() - 1
            if disc[w] == -1:
                disc[w] = low[w] = counter
                counter += 1
                parent[w] = v
                kids[v].append(w)
                stack.append((w, adj[w]))
            elif w != parent[v] and disc[w] < low[v]:
                low[v] = disc[w]
        else:
            stack.pop()
            if stack:
                p = stack[-1][0]
                size[p] += size[v]
                if low[v] < low[p]:
                    low[p] = low[v]
    floor = [0] * n
    for v in range(n):
        if v == 0:
            seps = kids[v]
            has_rest = False
        else:
            seps = [c for c in kids[v] if low[c] >= disc[v]]
            has_rest = True
        comps = len(seps) + has_rest
        t = tadj[v]
        dt = _popcount(t)
        if comps <= 1:
            floor[v] = max(dt, 1 if n > 1 else 0)
            continue
        if not t:
            floor[v] = comps
            continue
        served = set()
        tt = t
        while tt:
            bit = tt & -tt
            tt ^= bit
            w = bit.bit_length() - 1
            dw = disc[w]
            for c in seps:
                if disc[c] <= dw < disc[c] + size[c]:
                    served.add(c)
                    break
            else:
                served.add(-1)
        floor[v] = dt + comps - len(served)
    return floor


class _Search:
    def __init__(self, g: Graph, k: int, node_cap: int | None):
        self.n = g.n
        self.adj = list(g.masks)
        self.tadj = [0] * g.n
        self.k = k
        self.node_cap = node_cap
        self.explored = 0
        self.inside = 1
        self.full = (1 << g.n) - 1
        self.solution: list[tuple[int, int]] | None = None

    def _remove(self, u: int, v: int) -> None:
        self.adj[u] &= ~(1 << v)
        self.adj[v] &= ~(1 << u)

    def _restore(self, u: int, v: int) -> None:
        self.adj[u] |= 1 << v
        self.adj[v] |= 1 << u

    def run(self) -> bool:
        return self._node()

    def _node(self) -> bool:
        self.explored += 1
        if self.node_cap is not None and self.explored > self.node_cap:
            raise OracleError("node cap exceeded")
        n, k = self.n, self.k
        if self.inside == self.full:
            self.solution = [
                (u, v) for u in range(n) for v in range(u + 1, n) if self.tadj[u] >> v & 1
            ]
            return True
        if not _connected_masks(self.adj, n):
            return False
        floor = _degree_floor(self.adj, self.tadj, n)
        must = [v for v in range(n) if floor[v] >= 3]
        if len(must) > k:
            return False
        gdeg = [_popcount(a) for a in self.adj]
        leaves = sum(1 for d in gdeg if d == 1)
        if leaves > 2:
            room = sum(gdeg[v] - 2 for v in must)
            if len(must) < k:
                mset = set(must)
                extra = sorted((gdeg[v] - 2 for v in range(n) if v not in mset and gdeg[v] >= 3), reverse=True)
                room += sum(extra[: k - len(must)])
            if room < leaves - 2:
                return False
        if len(must) == k:
            mset = set(must)
            dropped = []
            for u in range(n):
                if u in mset or _popcount(self.tadj[u]) != 2:
                    continue
                spare = self.adj[u] & ~self.tadj[u]
                while spare:
                    bit = spare & -spare
                    spare ^= bit
                    w = bit.bit_length() - 1
                    self._remove(u, w)
                    dropped.append((u, w))
            if dropped:
                ok = self._node()
                for u, w in dropped:
                    self._restore(u, w)
                return ok
        # fail-first: the outside vertex with fewest remaining options
        best = None
        out = self.full & ~self.inside
        f = out
        while f:
            bit = f & -f
            f ^= bit
            v = bit.bit_length() - 1
            hooks = self.adj[v] & self.inside
            if hooks:
                key = (gdeg[v], v)
                if best is None or key < best[0]:
                    best = (key, v, hooks)
        _, v, hooks = best
        u = min(
            (w for w in range(n) if hooks >> w & 1),
            key=lambda w: (_popcount(self.tadj[w]), w),
        )
        self.tadj[u] |= 1 << v
        self.tadj[v] |= 1 << u
        self.inside |= 1 << v
        ok = self._node()
        self.inside &= ~(1 << v)
        self.tadj[u] &= ~(1 << v)
        self.tadj[v] &= ~(1 << u)
        if ok:
            return True
        self._remove(u, v)
        ok = self._node()
        self._restore(u, v)
        return ok


def _heuristic_tree(g: Graph) -> list[tuple[int, int]]:
    path = hamiltonian_path(g, seed=0, restarts=4)
    if path is not None:
        return [(min(a, b), max(a, b)) for a, b in zip(path, path[1:])]
    # DFS tree from each low-degree start; keep the one with fewest branches.
    best = None
    for start in sorted(range(g.n), key=lambda v: (g.degree(v), v))[:4]:
        seen = {start}
        edges = []
        stack = [(start, iter(sorted(g.neighbors(start))))]
        while stack:
            v, it = stack[-1]
            w = next((x for x in it if x not in seen), None)
            if w is None:
                stack.pop()
                continue
            seen.add(w)
            edges.append((min(v, w), max(v, w)))
            stack.append((w, iter(sorted(g.neighbors(w), key=lambda x: (g.degree(x), x)))))
        if best is None or _branches_of(g.n, edges) < _branches_of(g.n, best):
            best = edges
    return best


def _root_floor(g: Graph) -> int:
    if g.n <= 2:
        return 0
    floor = _degree_floor(list(g.masks), [0] * g.n, g.n)
    return sum(1 for d in floor if d >= 3)


def min_branch_tree(
    g: Graph,
    limit: int | None = None,
    method: str = "branch_and_bound",
    node_cap: int | None = None,
) -> OracleResult:
    """Exact minimum number of branch vertices over spanning trees of ``g``.

    With ``limit`` the search only decides "at most ``limit``" and may return
    ``status="at_most"`` or ``"more_than"`` instead of the exact value.
    """
    if method not in ("branch_and_bound", "exhaustive"):
        raise ValueError(f"unknown method {method!r}")
    if not is_connected(g):
        raise OracleError("graph is disconnected")
    if method == "exhaustive":
        return _exhaustive(g, limit)
    if g.n > BNB_MAX_N:
        raise OracleError(f"branch-and-bound is limited to n <= {BNB_MAX_N}")
    if g.n <= 2:
        t = SpanningTree.from_edges(g.n, g.edges())
        return OracleResult("exact", 0, 0, t, 0, method)
    lb = _root_floor(g)
    heur = _heuristic_tree(g)
    ub = _branches_of(g.n, heur)
    explored = 0
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20 * (g.m + g.n) + 1000))
    try:
        if limit is not None:
            if ub <= limit:
                return OracleResult("at_most", lb, ub, SpanningTree.from_edges(g.n, heur), 0, method)
            if lb > limit:
                return OracleResult("more_than", lb, ub, None, 0, method)
            search = _Search(g, limit, node_cap)
            if search.run():
                t = SpanningTree.from_edges(g.n, search.solution)
                return OracleResult("at_most", lb, t.branch_count, t, search.explored, method)
            return OracleResult("more_than", limit + 1, ub, None, search.explored, method)
        for k in range(lb, ub):
            search = _Search(g, k, node_cap)
            found = search.run()
            explored += search.explored
            if found:
                t = SpanningTree.from_edges(g.n, search.solution)
                return OracleResult("exact", t.branch_count, t.branch_count, t, explored, method)
        return OracleResult("exact", ub, ub, SpanningTree.from_edges(g.n, heur), explored, method)
    finally:
        sys.setrecursionlimit(old)


def _exhaustive(g: Graph, limit: int | None) -> OracleResult:
    if g.n > EXHAUSTIVE_MAX_N:
        raise OracleError(f"exhaustive enumeration is limited to n <= {EXHAUSTIVE_MAX_N}")
    if spanning_tree_count(g) > TREE_CAP:
        raise OracleError(f"more than {TREE_CAP} spanning trees")
    best = None
    best_b = None
    explored = 0
    for edges in enumerate_spanning_trees(g):
        explored += 1
        b = _branches_of(g.n, edges)
        if best_b is None or b < best_b or (b == best_b and edges < best):
            best, best_b = edges, b
        if limit is not None and b <= limit:
            t = SpanningTree.from_edges(g.n, edges)
            return OracleResult("at_most", 0, b, t, explored, "exhaustive")
    t = SpanningTree.from_edges(g.n, best)
    if limit is not None:
        return OracleResult("more_than", best_b, best_b, t, explored, "exhaustive")
    return OracleResult("exact", best_b, best_b, t, explored, "exhaustive")


# ---------------------------------------------------------------------------
# Star-2-matching enumeration
# ---------------------------------------------------------------------------

def _odd_cycles_from(g: Graph, v: int, free: int) -> Iterator[tuple[int, ...]]:
    """Odd cycles with minimum vertex ``v`` inside ``free``; each cycle once."""
    path = [v]

    def rec(u: int, used: int) -> Iterator[tuple[int, ...]]:
        nb = g.mask(u) & free & ~used
        while nb:
            bit = nb & -nb
            nb ^= bit
            w = bit.bit_length() - 1
            if w < v:
                continue
            path.append(w)
            if len(path) >= 3 and len(path) % 2 == 1 and g.has_edge(w, v) and path[1] < w:
                yield tuple(path)
            yield from rec(w, used | bit)
            path.pop()

    yield from rec(v, 1 << v)


def enumerate_star_two_matchings(g: Graph, s: int, spanning: bool = True, max_n: int = EXHAUSTIVE_MAX_N):
    """All t-star-2-matchings of ``g`` with ``t <= s`` (spanning ones if asked).

    Returns :class:`~lowbranch.stars.StarTwoMatching` objects in canonical order.
    Components are built around the lowest vertex not yet decided, so each
    structure is generated exactly once.
    """
    from .stars import StarTwoMatching

    if g.n > max_n:
        raise OracleError(f"enumeration is limited to n <= {max_n}")
    n = g.n
    out = []
    edges: list[tuple[int, int]] = []
    cycles: list[tuple[int, ...]] = []
    stars: list[tuple[int, tuple[int, ...]]] = []

    def subsets(mask: int, min_size: int) -> Iterator[tuple[int, ...]]:
        items = [i for i in range(n) if mask >> i & 1]
        for r in range(min_size, len(items) + 1):
            yield from combinations(items, r)

    def rec(free: int) -> None:
        if not free:
            out.append(StarTwoMatching.build(edges, cycles, stars))
            return
        v = (free & -free).bit_length() - 1
        rest = free & ~(1 << v)
        if not spanning:
            rec(rest)
        nb = g.mask(v) & rest
        w_mask = nb
        while w_mask:
            bit = w_mask & -w_mask
            w_mask ^= bit
            w = bit.bit_length() - 1
            edges.append((v, w))
            rec(rest & ~bit)
            edges.pop()
        if len(stars) < s:
            for leaves in subsets(nb, 2):
                used = sum(1 << x for x in leaves)
                stars.append((v, leaves))
                rec(rest & ~used)
                stars.pop()
            c_mask = nb
            while c_mask:
                bit = c_mask & -c_mask
                c_mask ^= bit
                c = bit.bit_length() - 1
                others = g.mask(c) & rest & ~bit
                for more in subsets(others, 1):
                    leaves = tuple(sorted((v,) + more))
                    used = bit | sum(1 << x for x in more)
                    stars.append((c, leaves))
                    rec(rest & ~used)
                    stars.pop()
        for cyc in _odd_cycles_from(g, v, free):
            used = sum(1 << x for x in cyc)
            cycles.append(cyc)
            rec(free & ~used)
            cycles.pop()

    rec((1 << n) - 1)
    out.sort(key=lambda sm: sm.sort_key())
    return out


# ---------------------------------------------------------------------------
# Fractional matching number
# ---------------------------------------------------------------------------

def fractional_matching_number(g: Graph) -> Fraction:
    """``(n - max_S (i(G - S) - |S|)) / 2`` with ``i`` counting isolated vertices.

    Evaluated over all ``2**n`` sets ``S`` at once; limited to ``n <= 20``.
    """
    n = g.n
    if n > 20:
        raise OracleError("fractional matching enumeration is limited to n <= 20")
    subs = np.arange(1 << n, dtype=np.int64)
    score = np.zeros(subs.shape, dtype=np.int64)
    for v, m in enumerate(g.masks):
        score += (((subs >> v) & 1) == 0) & ((m & ~subs) == 0)
        score -= (subs >> v) & 1
    return Fraction(n - int(score.max()), 2)
