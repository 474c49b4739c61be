"""Deterministic instance families.

* ``extremal``: connected, ``n = (s+3)m - 2``, minimum degree ``m-1``, and no
  spanning tree with at most ``s`` branch vertices.
* ``path_of_cliques``: ``s+3`` copies of ``K_m`` strung along a path.
* ``bipartite_lower``: ``s+1`` disjoint near-balanced complete bipartite graphs.
* ``random_mindeg``: seeded random connected graph with a minimum-degree floor.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .graph import Graph
from .rng import Rng

FAMILIES = ("extremal", "path_of_cliques", "bipartite_lower", "random_mindeg")
GADGETS = ("H1", "H2")


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class InstanceSpec:
    family: str
    s: int = 1
    m: int = 2
    n: int = 0
    min_degree: int = 0
    seed: int = 0
    end_gadget: tuple[str, str] = ("H1", "H1")
    part: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown family {self.family!r}")
        if self.family in ("extremal", "path_of_cliques"):
            _check_sm(self.s, self.m)
        if self.family == "extremal":
            _check_ends(self.end_gadget)
        if self.family == "bipartite_lower" and (self.s < 1 or self.part < 2):
            raise ParameterError("bipartite_lower needs s >= 1 and part >= 2")
        if self.family == "random_mindeg" and not 0 <= self.min_degree < self.n:
            raise ParameterError("random_mindeg needs 0 <= min_degree < n")

    def build(self) -> Graph:
        if self.family == "extremal":
            return gen_extremal(self.s, self.m, self.end_gadget)
        if self.family == "path_of_cliques":
            return gen_path_of_cliques(self.s, self.m)
        if self.family == "bipartite_lower":
            return gen_bipartite_lower(self.s, self.part)
        return gen_random_mindeg(self.n, self.min_degree, self.seed)


def _check_sm(s: int, m: int) -> None:
    if s < 1:
        raise ParameterError(f"s must be >= 1, got {s}")
    if m < 2:
        raise ParameterError(f"m must be >= 2, got {m}")


def _check_ends(ends: tuple[str, str]) -> None:
    if len(ends) != 2 or any(e not in GADGETS for e in ends):
        raise ParameterError(f"end gadgets must be a pair from {GADGETS}, got {ends!r}")


class _Builder:
    def __init__(self):
        self.n = 0
        self.edges: list[tuple[int, int]] = []

    def new(self, k: int) -> list[int]:
        vs = list(range(self.n, self.n + k))
        self.n += k
        return vs

    def clique(self, vs: list[int]) -> None:
        self.edges.extend(combinations(vs, 2))


def extremal_layout(s: int, m: int, ends: tuple[str, str] = ("H1", "H1")) -> tuple[Graph, list[int]]:
    """Extremal instance together with its spine ``b_1..b_{s+1}``.

    ``H1`` is two ``K_m`` glued at a vertex, with the spine end placed at the
    glue vertex. ``H2`` is an independent ``m``-set joined to ``K_{m-1}``, with
    the spine end placed in the ``K_{m-1}`` side so that the spine edge lands in
    the smaller side.
    """
    _check_sm(s, m)
    _check_ends(ends)
    bld = _Builder()
    spine: list[int] = []

    def end_gadget(kind: str) -> int:
        if kind == "H1":
            first = bld.new(m)
            second = [first[0]] + bld.new(m - 1)
            bld.clique(first)
            bld.clique(second)
            return first[0]
        small = bld.new(m - 1)
        indep = bld.new(m)
        bld.clique(small)
        bld.edges.extend((a, b) for a in small for b in indep)
        return small[0]

    spine.append(end_gadget(ends[0]))
    for _ in range(2, s + 1):
        k = bld.new(m)
        bld.clique(k)
        spine.append(k[0])
    spine.append(end_gadget(ends[1]))
    bld.edges.extend(zip(spine, spine[1:]))
    g = Graph(bld.n, bld.edges)
    assert g.n == (s + 3) * m - 2
    return g, spine


def gen_extremal(s: int, m: int, ends: tuple[str, str] = ("H1", "H1")) -> Graph:
    return extremal_layout(s, m, ends)[0]


def path_of_cliques_layout(s: int, m: int) -> tuple[Graph, list[list[int]]]:
    """Path-of-cliques instance and its ``s+3`` cliques (path vertex first in each)."""
    _check_sm(s, m)
    bld = _Builder()
    cliques = []
    for _ in range(s + 3):
        k = bld.new(m)
        bld.clique(k)
        cliques.append(k)
    bld.edges.extend((a[0], b[0]) for a, b in zip(cliques, cliques[1:]))
    return Graph(bld.n, bld.edges), cliques


def gen_path_of_cliques(s: int, m: int) -> Graph:
    return path_of_cliques_layout(s, m)[0]


def bipartite_lower_sides(s: int, part: int) -> tuple[list[int], list[int]]:
    """``(larger sides, smaller sides)`` of :func:`gen_bipartite_lower`."""
    if s < 1 or part < 2:
        raise ParameterError("bipartite_lower needs s >= 1 and part >= 2")
    big = (part + 1) // 2
    a, b = [], []
    for i in range(s + 1):
        base = i * part
        a.extend(range(base, base + big))
        b.extend(range(base + big, base + part))
    return a, b


def gen_bipartite_lower(s: int, part: int) -> Graph:
    """``s+1`` disjoint copies of ``K_{ceil(part/2), floor(part/2)}``."""
    a, b = bipartite_lower_sides(s, part)
    big = (part + 1) // 2
    edges = []
    for i in range(s + 1):
        xs = a[i * big:(i + 1) * big]
        ys = b[i * (part - big):(i + 1) * (part - big)]
        edges.extend((x, y) for x in xs for y in ys)
    return Graph((s + 1) * part, edges)


def gen_random_mindeg(n: int, min_degree: int, seed: int = 0, p: float | None = None) -> Graph:
    """Random connected graph with ``min_degree(g) >= min_degree``.

    Each pair is kept with probability ``p`` (default ``min_degree/(n-1)``, so
    instances sit near the degree floor). Deficient vertices, in index order,
    then gain edges to uniformly chosen non-neighbours, and finally each
    component after the first is bridged to a uniform vertex of the earlier ones.
    """
    if n < 1:
        raise ParameterError("n must be positive")
    if not 0 <= min_degree < n:
        raise ParameterError(f"infeasible minimum degree {min_degree} for n={n}")
    rng = Rng(seed)
    if p is None:
        p = min_degree / (n - 1) if n > 1 else 0.0
    adj = [set() for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                adj[u].add(v)
                adj[v].add(u)
    for v in range(n):
        while len(adj[v]) < min_degree:
            options = [w for w in range(n) if w != v and w not in adj[v]]
            w = rng.choice(options)
            adj[v].add(w)
            adj[w].add(v)
    g = Graph(n, ((u, v) for u in range(n) for v in adj[u] if u < v))
    comps = g.components()
    extra = []
    for i in range(1, len(comps)):
        earlier = [v for c in comps[:i] for v in c]
        extra.append((rng.choice(comps[i]), rng.choice(earlier)))
    return g.with_edges(extra) if extra else g
