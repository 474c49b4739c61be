"""Star-matchings and star-2-matchings.

A t-star-2-matching is a vertex-disjoint union of edges, odd cycles and exactly
``t`` non-trivial stars (a centre with at least two leaves); without cycles it
is a t-star-matching.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .graph import Graph
from .matchings import (
    GallaiEdmonds,
    _canonical_cycle,
    bipartite_max_matching,
    gallai_edmonds_sets,
    max_two_matching,
)


class HypothesisViolation(ValueError):
    """Input outside the hypotheses of the construction; ``witness`` names the culprit."""

    def __init__(self, reason: str, witness: Iterable[int] = ()):
        self.reason = reason
        self.witness = tuple(sorted(witness))
        super().__init__(f"{reason}: {list(self.witness)}")


class StageFailure(RuntimeError):
    """A construction stage could not complete; ``partial`` is the best structure so far."""

    def __init__(self, stage: str, message: str, partial: "StarTwoMatching | None" = None):
        self.stage = stage
        self.partial = partial
        super().__init__(f"{stage}: {message}")


@dataclass(frozen=True)
class StarTwoMatching:
    plain_edges: tuple[tuple[int, int], ...]
    odd_cycles: tuple[tuple[int, ...], ...]
    stars: tuple[tuple[int, tuple[int, ...]], ...]
    trace: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @classmethod
    def build(cls, edges=(), cycles=(), stars=(), trace=None):
        return cls(
            tuple(sorted((min(u, v), max(u, v)) for u, v in edges)),
            tuple(sorted(_canonical_cycle(c) for c in cycles)),
            tuple(sorted((c, tuple(sorted(ls))) for c, ls in stars)),
            dict(trace or {}),
        )

    @property
    def t(self) -> int:
        return len(self.stars)

    @property
    def covered(self) -> frozenset[int]:
        out = [x for e in self.plain_edges for x in e]
        out += [x for c in self.odd_cycles for x in c]
        out += [x for c, ls in self.stars for x in (c, *ls)]
        return frozenset(out)

    def all_edges(self) -> list[tuple[int, int]]:
        out = list(self.plain_edges)
        for c in self.odd_cycles:
            out.extend((min(a, b), max(a, b)) for a, b in zip(c, c[1:] + c[:1]))
        for c, ls in self.stars:
            out.extend((min(c, x), max(c, x)) for x in ls)
        return out

    def sort_key(self):
        return (self.t, len(self.odd_cycles), self.stars, self.odd_cycles, self.plain_edges)

    def to_json(self) -> dict:
        return {
            "edges": [list(e) for e in self.plain_edges],
            "odd_cycles": [list(c) for c in self.odd_cycles],
            "stars": [{"center": c, "leaves": list(ls)} for c, ls in self.stars],
            "t": self.t,
        }


@dataclass(frozen=True)
class StarMatching(StarTwoMatching):
    def __post_init__(self):
        if self.odd_cycles:
            raise ValueError("a star-matching has no odd cycles")


@dataclass(frozen=True)
class Verdict:
    problems: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self) -> bool:
        return self.ok


def validate_star_matching(
    g: Graph,
    sm: StarTwoMatching,
    require_spanning: bool = False,
    s: int | None = None,
) -> Verdict:
    """Independent certificate check listing every violation found."""
    problems = []
    seen: dict[int, str] = {}

    def claim(v: int, what: str) -> None:
        if not 0 <= v < g.n:
            problems.append(f"{what}: vertex {v} outside the graph")
        elif v in seen:
            problems.append(f"{what}: vertex {v} already used by {seen[v]}")
        else:
            seen[v] = what

    def edge(u: int, v: int, what: str) -> None:
        if not (0 <= u < g.n and 0 <= v < g.n and g.has_edge(u, v)):
            problems.append(f"{what}: phantom edge ({u}, {v})")

    for u, v in sm.plain_edges:
        claim(u, f"edge {u}-{v}")
        claim(v, f"edge {u}-{v}")
        edge(u, v, f"edge {u}-{v}")
    for c in sm.odd_cycles:
        name = f"cycle {list(c)}"
        if len(c) < 3 or len(c) % 2 == 0:
            problems.append(f"{name}: length {len(c)} is not odd and at least 3")
        for x in c:
            claim(x, name)
        for a, b in zip(c, c[1:] + c[:1]):
            edge(a, b, name)
    for centre, leaves in sm.stars:
        name = f"star at {centre}"
        if len(leaves) < 2:
            problems.append(f"{name}: trivial star with {len(leaves)} leaf")
        claim(centre, name)
        for x in leaves:
            claim(x, name)
            edge(centre, x, name)
    if s is not None and sm.t > s:
        problems.append(f"{sm.t} stars exceed the bound {s}")
    if require_spanning:
        missing = sorted(set(range(g.n)) - set(seen))
        if missing:
            problems.append(f"not spanning; uncovered {missing}")
    return Verdict(tuple(problems))


# ---------------------------------------------------------------------------
# Hall violators and bipartite star-matchings
# ---------------------------------------------------------------------------

def meets_star_bound(d: int, n: int, s: int) -> bool:
    """``d >= n / (sqrt(s) + 1)**2`` decided in integers."""
    # d*(s+1) + 2*d*sqrt(s) >= n
    rhs = n - d * (s + 1)
    return rhs <= 0 or (d >= 0 and 4 * d * d * s >= rhs * rhs)


def _violator(adj: dict[int, list[int]], side: Sequence[int], mate: dict[int, int]) -> frozenset[int] | None:
    """Alternating-forest violator from the lowest ``side`` vertex left unmatched by ``mate``."""
    matched = set(mate.values())
    free = [a for a in side if a not in matched]
    if not free:
        return None
    root = free[0]
    reached = {root}
    queue = deque([root])
    while queue:
        a = queue.popleft()
        for b in adj[a]:
            nxt = mate.get(b)
            if nxt is None:
                raise AssertionError("matching is not maximum")
            if nxt not in reached:
                reached.add(nxt)
                queue.append(nxt)
    return frozenset(reached)


def _max_side_matching(adj: dict[int, list[int]], side: Sequence[int]) -> dict[int, int]:
    """Maximum matching of ``side`` into the other side, as ``right -> left``."""
    return bipartite_max_matching(side, adj, mate_right={})


def _check_bipartite(g: Graph, side_a, side_b) -> tuple[list[int], list[int]]:
    a, b = sorted(set(side_a)), sorted(set(side_b))
    if set(a) & set(b):
        raise ValueError("sides overlap")
    if set(a) | set(b) != set(range(g.n)):
        raise ValueError("sides must partition the vertex set")
    sa = set(a)
    for u, v in g.edges():
        if (u in sa) == (v in sa):
            raise ValueError(f"edge ({u}, {v}) lies inside one side")
    return a, b


def find_hall_violator(g: Graph, side_a: Iterable[int], side_b: Iterable[int]) -> frozenset[int] | None:
    """``U`` within ``side_a`` with ``|N(U)| < |U|``, or ``None`` when a matching saturates ``side_a``."""
    a, _ = _check_bipartite(g, side_a, side_b)
    adj = {x: sorted(g.neighbors(x)) for x in a}
    return _violator(adj, a, _max_side_matching(adj, a))


def bipartite_star_matching(
    g: Graph,
    side_a: Iterable[int],
    side_b: Iterable[int],
    s: int,
    strict: bool = True,
) -> StarMatching:
    """Spanning t-star-matching with star centres in ``side_b``.

    Centres are peeled greedily: each round takes a Hall violator ``U`` of the
    still uncovered part of ``A`` (all of ``A`` in the first round), picks
    ``b`` in ``N(U)`` with the most neighbours in ``U`` and claims
    ``A_i = N(b) - (A_1 + ... + A_{i-1})``. Once the rest of ``A`` can be
    matched, that matching is merged with a matching saturating ``B`` so that
    both ``B`` and the rest of ``A`` are covered; what is left of ``A`` hangs
    off the centres.

    ``strict`` enforces the degree bound and the ``s``-round limit; otherwise
    the peeling simply continues and the caller inspects ``t``.
    """
    if s < 0:
        raise ValueError("s must be non-negative")
    a_side, b_side = _check_bipartite(g, side_a, side_b)
    n = g.n
    adj_b = {b: sorted(g.neighbors(b)) for b in b_side}
    m_rl = _max_side_matching(adj_b, b_side)
    if len(m_rl) < len(b_side):
        raise HypothesisViolation("no matching saturates B", _violator(adj_b, b_side, m_rl))
    match_b = {b: a for a, b in m_rl.items()}
    low = [a for a in a_side if not meets_star_bound(g.degree(a), n, s)]
    if strict and low:
        raise HypothesisViolation("degree below n/(sqrt(s)+1)^2", low)
    if len(match_b) == len(a_side):
        return StarMatching.build(match_b.items(), trace={"rounds": ()})

    rounds: list[tuple[int, frozenset[int]]] = []
    violators: list[frozenset[int]] = []
    peeled: set[int] = set()
    centres: list[int] = []
    u_set: frozenset[int] = frozenset(a_side)
    while True:
        options = sorted(g.neighborhood(u_set) - set(centres))
        if not options:
            raise StageFailure("star-rounds", f"vertices {sorted(u_set)} have no available neighbours")
        b = max(options, key=lambda x: (g.degree_into(x, u_set), -x))
        claimed = frozenset(g.neighbors(b) - peeled)
        rounds.append((b, claimed))
        violators.append(u_set)
        centres.append(b)
        peeled |= claimed
        rest = [a for a in a_side if a not in peeled]
        adj_rest = {a: sorted(g.neighbors(a)) for a in rest}
        m_rest = _max_side_matching(adj_rest, rest)
        if len(m_rest) == len(rest):
            break
        if strict and len(rounds) >= s:
            raise StageFailure("star-rounds", f"residue still unmatched after {s} rounds")
        u_set = _violator(adj_rest, rest, m_rest)

    # Merge: start from the residual matching and augment along M-alternating
    # paths until every B vertex is covered (each such path ends in A).
    mate: dict[int, int] = {}
    for b, a in m_rest.items():
        mate[a], mate[b] = b, a
    for b in b_side:
        if b in mate:
            continue
        chain = [b]
        cur = b
        while True:
            a = match_b[cur]
            if a not in mate:
                break
            cur = mate[a]
            chain.append(cur)
        for x in chain:
            y = match_b[x]
            mate[x], mate[y] = y, x
    leaves: dict[int, list[int]] = {c: [] for c in centres}
    for a in a_side:
        if a not in mate:
            host = min(c for c in centres if g.has_edge(a, c))
            leaves[host].append(a)
    edges = []
    stars = []
    for b in b_side:
        extra = leaves.get(b, [])
        partner = mate.get(b)
        group = ([partner] if partner is not None else []) + extra
        if len(group) >= 2:
            stars.append((b, group))
        elif group:
            edges.append((b, group[0]))
    return StarMatching.build(edges, (), stars, trace={"rounds": tuple(rounds), "violators": tuple(violators)})


# ---------------------------------------------------------------------------
# Star-2-matchings in general graphs
# ---------------------------------------------------------------------------

def star_two_matching(g: Graph, s: int, ge: GallaiEdmonds | None = None) -> StarTwoMatching:
    """Spanning t-star-2-matching with ``t <= s``, or :class:`StageFailure`.

    From a maximum 2-matching ``M`` and the singleton set ``A1`` of the
    Gallai-Edmonds set ``A``: the edges ``M^`` of ``M`` at ``A1`` pair ``A1``
    with part of ``B = N(A1)``. Low-degree vertices of ``A1`` are matched
    first, reusing ``M^`` as much as possible; the remaining bipartite graph
    goes through :func:`bipartite_star_matching`. ``A1`` vertices whose every
    neighbour is already spoken for hang off a neighbour's component.
    """
    n = g.n
    if ge is None:
        ge = gallai_edmonds_sets(g)
    tm = max_two_matching(g, ge)
    a1 = sorted(ge.A1)
    a1_set = set(a1)
    b_all = sorted(g.neighborhood(a1_set))
    hat: dict[int, int] = {}
    keep_edges = []
    for u, v in tm.edges:
        if u in a1_set or v in a1_set:
            a, b = (u, v) if u in a1_set else (v, u)
            hat[b] = a
        else:
            keep_edges.append((u, v))
    if any(x in a1_set for c in tm.odd_cycles for x in c):
        raise StageFailure("two-matching", "an odd cycle meets A1")
    b_set = set(b_all)
    exceptional = [a for a in a1 if not meets_star_bound(g.degree_into(a, b_set), n, s)]
    trace = {"A1": tuple(a1), "B": tuple(b_all), "exceptional": tuple(exceptional)}

    # M': saturate the exceptional vertices, maximising reuse of M^.
    m_prime: dict[int, int] = {}
    if exceptional:
        col = {b: j for j, b in enumerate(b_all)}
        forbid = len(exceptional) + 1
        cost = np.full((len(exceptional), len(b_all)), forbid, dtype=np.int64)
        for i, a in enumerate(exceptional):
            for b in g.neighbors(a):
                cost[i, col[b]] = -1 if hat.get(b) == a else 0
        if len(exceptional) > len(b_all):
            raise StageFailure("exceptional-matching", "more exceptional vertices than neighbours",
                               StarTwoMatching.build(keep_edges, tm.odd_cycles, (), trace))
        rows, cols = linear_sum_assignment(cost)
        for i, j in zip(rows, cols):
            if cost[i, j] >= forbid:
                raise StageFailure("exceptional-matching", "no matching saturates the exceptional set",
                                   StarTwoMatching.build(keep_edges, tm.odd_cycles, (), trace))
            m_prime[b_all[j]] = exceptional[i]
    used_b = set(m_prime)
    rest_a = [a for a in a1 if a not in set(exceptional)]
    hat_rest = sorted(b for b in hat if b not in used_b)
    for b in hat_rest:
        if hat[b] not in rest_a:
            raise StageFailure("exceptional-matching", f"M^ partner of {b} was displaced")
    hat_rest_set = set(hat_rest)
    orphans = [a for a in rest_a if not g.neighbors(a) & hat_rest_set]
    core_a = [a for a in rest_a if a not in set(orphans)]
    trace["orphans"] = tuple(orphans)

    edges = list(keep_edges) + [(b, a) for b, a in m_prime.items()]
    stars: list[tuple[int, list[int]]] = []
    if core_a:
        labels = core_a + hat_rest
        index = {v: i for i, v in enumerate(labels)}
        sub = Graph(
            len(labels),
            ((index[a], index[b]) for a in core_a for b in g.neighbors(a) if b in hat_rest_set),
        )
        sm = bipartite_star_matching(sub, range(len(core_a)), range(len(core_a), len(labels)), s, strict=False)
        edges.extend((labels[u], labels[v]) for u, v in sm.plain_edges)
        stars.extend((labels[c], [labels[x] for x in ls]) for c, ls in sm.stars)
        trace["rounds"] = tuple((labels[b], frozenset(labels[x] for x in ai)) for b, ai in sm.trace["rounds"])

    for a in orphans:
        placed = False
        for b in sorted(g.neighbors(a)):
            hit = next((i for i, e in enumerate(edges) if b in e), None)
            if hit is not None:
                u, v = edges.pop(hit)
                stars.append((b, [v if u == b else u, a]))
                placed = True
                break
            host = next((st for st in stars if st[0] == b), None)
            if host is not None:
                host[1].append(a)
                placed = True
                break
        if not placed:
            raise StageFailure("orphan", f"A1 vertex {a} has no neighbour that can take it",
                               StarTwoMatching.build(edges, tm.odd_cycles, stars, trace))
    result = StarTwoMatching.build(edges, tm.odd_cycles, stars, trace)
    if result.t > s:
        raise StageFailure("star-budget", f"{result.t} stars exceed s={s}", result)
    if not result.odd_cycles:
        result = StarMatching.build(result.plain_edges, (), result.stars, trace)
    return result
