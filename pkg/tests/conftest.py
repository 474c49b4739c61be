from __future__ import annotations

import os

from hypothesis import HealthCheck, settings, strategies as st

from lowbranch.graph import Graph

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 8, connected: bool = False) -> Graph:
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    if connected:
        # a random spanning path keeps it connected
        order = draw(st.permutations(range(n)))
        extra = {(min(a, b), max(a, b)) for a, b in zip(order, order[1:])}
        chosen = sorted(set(chosen) | extra)
    return Graph(n, chosen)


def two_cliques(k: int) -> Graph:
    edges = [(a, b) for a in range(k) for b in range(a + 1, k)]
    edges += [(a + k, b + k) for a in range(k) for b in range(a + 1, k)]
    edges.append((k - 1, k))
    return Graph(2 * k, edges)
