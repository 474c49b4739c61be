"""Conjecture sweeps and the star-matching degree-threshold experiment."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .canon import connected_graphs
from .generators import bipartite_lower_sides, gen_bipartite_lower, gen_random_mindeg
from .graph import Graph
from .oracle import EXHAUSTIVE_MAX_N, enumerate_star_two_matchings, min_branch_tree
from .rng import Rng
from .stars import HypothesisViolation, StageFailure, bipartite_star_matching, meets_star_bound

EXHAUSTIVE_CONJECTURE_MAX_N = 9


def conjecture_degree(n: int, s: int) -> int:
    """``ceil((n - s) / (s + 3))``, floored at 0."""
    return max(0, -((s - n) // (s + 3)))


@dataclass(frozen=True)
class RandomSample:
    count: int
    seed: int = 0


@dataclass
class ConjectureReport:
    n_max: int
    s: int
    sample: str
    checked: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.checked.values())

    def to_json(self) -> dict:
        return {
            "schema": "lowbranch.conjecture/1",
            "n_max": self.n_max,
            "s": self.s,
            "sample": self.sample,
            "checked": {str(k): v for k, v in sorted(self.checked.items())},
            "total": self.total,
            "counterexamples": [{"n": n, "edges": [list(e) for e in es]} for n, es in self.counterexamples],
        }


def conjecture_instances(n_max: int, s: int, sample="exhaustive"):
    """Yield ``(n, graph)`` for connected graphs meeting the degree hypothesis."""
    if sample == "exhaustive":
        if n_max > EXHAUSTIVE_CONJECTURE_MAX_N:
            raise ValueError(f"exhaustive sweep is limited to n <= {EXHAUSTIVE_CONJECTURE_MAX_N}")
        for n in range(1, n_max + 1):
            d = conjecture_degree(n, s)
            for g in connected_graphs(n):
                if g.min_degree() >= d:
                    yield n, g
        return
    if not isinstance(sample, RandomSample):
        raise ValueError(f"unknown sample {sample!r}")
    root = Rng(sample.seed)
    for n in range(2, n_max + 1):
        d = max(1, conjecture_degree(n, s))
        stream = root.spawn(n)
        for i in range(sample.count):
            yield n, gen_random_mindeg(n, d, stream.spawn(i).raw())


def check_conjecture(n_max: int, s: int, sample="exhaustive") -> ConjectureReport:
    """Run the exact solver (decision form, limit ``s``) on every sampled graph."""
    label = "exhaustive" if sample == "exhaustive" else f"random({sample.count}, seed={sample.seed})"
    report = ConjectureReport(n_max, s, label)
    for n, g in conjecture_instances(n_max, s, sample):
        report.checked[n] = report.checked.get(n, 0) + 1
        res = min_branch_tree(g, limit=s)
        if res.status == "more_than":
            report.counterexamples.append((n, g.edges()))
    return report


# ---------------------------------------------------------------------------
# Star-matching threshold
# ---------------------------------------------------------------------------

def star_degree(n: int, s: int) -> int:
    """Least ``d`` with ``d >= n / (sqrt(s) + 1)**2``."""
    d = 0
    while not meets_star_bound(d, n, s):
        d += 1
    return d


def random_star_instance(n: int, s: int, seed: int, min_degree: int | None = None):
    """Random bipartite ``(g, A, B)`` with a matching saturating ``B``.

    Every vertex of ``A`` gets at least ``min_degree`` neighbours (default the
    degree bound ``n / (sqrt(s) + 1)**2``). Returns ``None`` when ``n`` is too
    small for that degree.
    """
    rng = Rng(seed)
    d = star_degree(n, s) if min_degree is None else min_degree
    lo, hi = max(d, 1), n // 2
    if lo > hi:
        return None
    nb = rng.integer(lo, hi)
    labels = list(range(n))
    rng.shuffle(labels)
    b_side, a_side = sorted(labels[:nb]), sorted(labels[nb:])
    adj = {a: set() for a in a_side}
    for a, b in zip(rng.sample(a_side, nb), b_side):
        adj[a].add(b)
    p = rng.random() * 0.5
    for a in a_side:
        for b in b_side:
            if rng.random() < p:
                adj[a].add(b)
        while len(adj[a]) < d:
            adj[a].add(rng.choice([b for b in b_side if b not in adj[a]]))
    g = Graph(n, ((a, b) for a in a_side for b in adj[a]))
    return g, a_side, b_side


def min_star_count(g: Graph) -> int | None:
    """Fewest stars in a spanning star-matching (no odd cycles), by enumeration."""
    found = [sm.t for sm in enumerate_star_two_matchings(g, g.n) if not sm.odd_cycles]
    return min(found) if found else None


def star_matching_bound(s: int, n: int, samples: int = 200, seed: int = 0) -> dict:
    """Probe the degree threshold for spanning star-matchings.

    Reports the witness from :func:`gen_bipartite_lower` and, for each degree
    ``d`` from ``ceil(n/(2s+2))`` up to ``n / (sqrt(s) + 1)**2``, how many random
    instances (with a matching saturating ``B``) have no spanning
    ``t``-star-matching with ``t <= s``. Exact checks need ``n <= 10``.
    """
    low = Fraction(n, 2 * s + 2)
    high = n / (math.sqrt(s) + 1) ** 2
    out = {
        "schema": "lowbranch.star-matching-bound/1",
        "s": s,
        "n": n,
        "lower_bound": str(low),
        "star_bound": round(high, 6),
        "star_degree": star_degree(n, s),
    }
    part = n // (s + 1)
    if part >= 2 and part * (s + 1) == n:
        g = gen_bipartite_lower(s, part)
        a_side, b_side = bipartite_lower_sides(s, part)
        wit = {
            "family": "bipartite_lower",
            "part": part,
            "min_degree_A": min(g.degree(a) for a in a_side),
            "degree_bound": f"n/{2 * s + 2}",
        }
        if n <= EXHAUSTIVE_MAX_N:
            t = min_star_count(g)
            wit["min_t"] = t
            wit["fails"] = t is None or t > s
        else:
            try:
                sm = bipartite_star_matching(g, a_side, b_side, s, strict=False)
                wit["greedy_t"] = sm.t
                wit["fails"] = sm.t > s
            except (HypothesisViolation, StageFailure) as exc:
                wit["greedy_error"] = str(exc)
        out["witness"] = wit
    rows = []
    if n <= EXHAUSTIVE_MAX_N:
        root = Rng(seed)
        for d in range(math.ceil(low), max(out["star_degree"], math.ceil(low)) + 1):
            tried = failed = 0
            for i in range(samples):
                inst = random_star_instance(n, s, root.spawn(d).spawn(i).raw(), d)
                if inst is None:
                    break
                tried += 1
                t = min_star_count(inst[0])
                if t is None or t > s:
                    failed += 1
            rows.append({"degree": d, "instances": tried, "failures": failed})
    out["search"] = rows
    return out
