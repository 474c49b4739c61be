"""Undirected simple graphs on vertices ``0..n-1`` and spanning trees over them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Raised when an edge set does not describe a simple graph."""


class InvalidTree(ValueError):
    """Raised when an edge set is not a spanning tree."""


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable undirected simple graph.

    Adjacency is kept twice: as frozensets for readable code and as integer
    bitmasks for the enumeration kernels.
    """

    __slots__ = ("n", "m", "_adj", "_masks", "_edges", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphError(f"negative vertex count {n}")
        adj: list[set[int]] = [set() for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            e = _norm(u, v)
            if e in seen:
                raise GraphError(f"parallel edge {e}")
            seen.add(e)
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self.m = len(seen)
        self._adj = tuple(frozenset(a) for a in adj)
        self._masks = tuple(sum(1 << w for w in a) for a in adj)
        self._edges = tuple(sorted(seen))
        self._hash = None

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, ((u, v) for u in range(n) for v in range(u + 1, n)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls(n, ((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, ((i, i + 1) for i in range(n - 1)))

    @classmethod
    def from_masks(cls, masks: Sequence[int]) -> "Graph":
        n = len(masks)
        return cls(n, ((u, v) for u in range(n) for v in range(u + 1, n) if masks[u] >> v & 1))

    # -- basic queries -------------------------------------------------
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges as ``(u, v)`` with ``u < v``, sorted lexicographically."""
        return self._edges

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def mask(self, v: int) -> int:
        return self._masks[v]

    @property
    def masks(self) -> tuple[int, ...]:
        return self._masks

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self._adj]

    def min_degree(self) -> int:
        return min((len(a) for a in self._adj), default=0)

    def degree_into(self, v: int, vertices: Iterable[int] | frozenset[int] | set[int]) -> int:
        """Number of neighbours of ``v`` inside ``vertices``."""
        vs = vertices if isinstance(vertices, (set, frozenset)) else set(vertices)
        return len(self._adj[v] & vs)

    def edges_within(self, vertices: Iterable[int]) -> int:
        vs = set(vertices)
        return sum(len(self._adj[v] & vs) for v in vs) // 2

    def edges_between(self, xs: Iterable[int], ys: Iterable[int]) -> int:
        ys = set(ys)
        return sum(len(self._adj[x] & ys) for x in set(xs))

    def neighborhood(self, vertices: Iterable[int]) -> set[int]:
        out: set[int] = set()
        for v in vertices:
            out |= self._adj[v]
        return out

    # -- derived graphs --------------------------------------------------
    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph relabelled to ``0..k-1``.

        Returns the subgraph and ``labels`` with ``labels[i]`` the original
        vertex behind new vertex ``i`` (ascending order is preserved).
        """
        labels = sorted(set(vertices))
        index = {v: i for i, v in enumerate(labels)}
        sub = Graph(
            len(labels),
            ((index[u], index[v]) for u, v in self._edges if u in index and v in index),
        )
        return sub, labels

    def remove_vertices(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        drop = set(vertices)
        return self.induced(v for v in range(self.n) if v not in drop)

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(self.n, list(self._edges) + [_norm(u, v) for u, v in extra])

    # -- connectivity ------------------------------------------------------
    def components(self, within: Iterable[int] | None = None) -> list[list[int]]:
        """Connected components (sorted lists, ordered by smallest vertex)."""
        allowed = set(range(self.n)) if within is None else set(within)
        seen: set[int] = set()
        comps = []
        for s in sorted(allowed):
            if s in seen:
                continue
            stack = [s]
            seen.add(s)
            comp = []
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self._adj[v]:
                    if w in allowed and w not in seen:
                        seen.add(w)
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return is_connected(self)

    def is_bipartite(self) -> bool:
        return bipartition(self) is not None

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self._edges == other._edges

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self._edges))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    full = (1 << g.n) - 1
    seen = 1
    frontier = 1
    masks = g.masks
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= masks[low.bit_length() - 1]
            f ^= low
        frontier = nxt & ~seen
        seen |= frontier
    return seen == full


def bipartition(g: Graph) -> tuple[list[int], list[int]] | None:
    """Two-colouring ``(side0, side1)``; each component's smallest vertex goes to side 0."""
    colour = [-1] * g.n
    for s in range(g.n):
        if colour[s] >= 0:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            v = stack.pop()
            for w in g.neighbors(v):
                if colour[w] < 0:
                    colour[w] = 1 - colour[v]
                    stack.append(w)
                elif colour[w] == colour[v]:
                    return None
    return [v for v in range(g.n) if colour[v] == 0], [v for v in range(g.n) if colour[v] == 1]


@dataclass(frozen=True)
class Cut:
    """A vertex bipartition ``(side, V - side)`` with its exact sparsity."""

    side: frozenset[int]
    crossing_edges: int
    sparsity: Fraction
    n: int

    def other(self) -> frozenset[int]:
        return frozenset(range(self.n)) - self.side

    def is_sparse(self, alpha: Fraction) -> bool:
        return self.sparsity < alpha

    def is_quarter_root_sparse(self, alpha: Fraction) -> bool:
        """``sparsity < alpha ** (1/4)``, decided as ``sparsity**4 < alpha``."""
        return self.sparsity ** 4 < Fraction(alpha)


def cut_edges(g: Graph, x: Iterable[int]) -> Cut:
    side = frozenset(x)
    k = len(side)
    if not 1 <= k <= g.n - 1:
        raise ValueError(f"cut side must have between 1 and n-1 vertices, got {k}")
    if any(not 0 <= v < g.n for v in side):
        raise ValueError("cut side contains a vertex outside the graph")
    crossing = sum(g.degree(v) - g.degree_into(v, side) for v in side)
    return Cut(side, crossing, Fraction(crossing, k * (g.n - k)), g.n)


@dataclass(frozen=True)
class SpanningTree:
    """Spanning tree stored as sorted edges plus a parent array rooted at ``root``."""

    n: int
    edges: tuple[tuple[int, int], ...]
    parent_of: tuple[int, ...]
    branch_vertices: frozenset[int]
    root: int = 0
    degree: tuple[int, ...] = field(repr=False, default=())

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], root: int = 0) -> "SpanningTree":
        es = sorted({_norm(int(u), int(v)) for u, v in edges})
        if n == 0:
            if es:
                raise InvalidTree("edges given for empty vertex set")
            return cls(0, (), (), frozenset(), 0, ())
        if len(es) != n - 1:
            raise InvalidTree(f"a spanning tree on {n} vertices has {n - 1} edges, got {len(es)}")
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in es:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise InvalidTree(f"bad edge ({u}, {v})")
            adj[u].append(v)
            adj[v].append(u)
        parent = [-2] * n
        parent[root] = -1
        stack = [root]
        reached = 1
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if parent[w] == -2:
                    parent[w] = v
                    reached += 1
                    stack.append(w)
        if reached != n:
            raise InvalidTree("edge set is not connected")
        deg = tuple(len(a) for a in adj)
        branches = frozenset(v for v in range(n) if deg[v] >= 3)
        return cls(n, tuple(es), tuple(parent), branches, root, deg)

    @property
    def branch_count(self) -> int:
        return len(self.branch_vertices)

    def leaves(self) -> list[int]:
        return [v for v in range(self.n) if self.degree[v] == 1]

    def is_subgraph_of(self, g: Graph) -> bool:
        return g.n == self.n and all(g.has_edge(u, v) for u, v in self.edges)


def branch_count(t: SpanningTree) -> int:
    return t.branch_count


def verify_tree(g: Graph, edges: Iterable[tuple[int, int]], max_branches: int | None = None) -> list[str]:
    """Independent certificate check; returns a list of problems (empty when valid).

    Uses union-find rather than the traversal in :meth:`SpanningTree.from_edges`.
    """
    problems = []
    es = [tuple(e) for e in edges]
    if len(es) != max(g.n - 1, 0):
        problems.append(f"expected {max(g.n - 1, 0)} edges, found {len(es)}")
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    deg = [0] * g.n
    for u, v in es:
        if not (0 <= u < g.n and 0 <= v < g.n) or not g.has_edge(u, v):
            problems.append(f"edge ({u}, {v}) is not in the graph")
            continue
        deg[u] += 1
        deg[v] += 1
        ru, rv = find(u), find(v)
        if ru == rv:
            problems.append(f"edge ({u}, {v}) closes a cycle")
        else:
            parent[ru] = rv
    if g.n and len({find(v) for v in range(g.n)}) != 1:
        problems.append("tree does not span the graph")
    if max_branches is not None:
        b = sum(1 for d in deg if d >= 3)
        if b > max_branches:
            problems.append(f"{b} branch vertices exceed the bound {max_branches}")
    return problems
