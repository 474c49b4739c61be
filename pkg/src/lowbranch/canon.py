"""Isomorph-free generation of small connected graphs.

Canonical forms come from colour refinement followed by individualisation
(every vertex of the first non-trivial cell is tried, twins only once), keeping
the lexicographically least relabelled adjacency. Connected graphs on ``n``
vertices are grown from those on ``n - 1`` by adding a vertex ``v`` that has
minimum degree among the non-cut vertices of the result; every connected graph
arises this way, and duplicates are removed by canonical form.

Lists are cached under ``$LOWBRANCH_CACHE`` (default ``~/.cache/lowbranch``).
"""

from __future__ import annotations

import os
from itertools import combinations
from pathlib import Path

from .graph import Graph

# Connected graphs on n unlabelled vertices (n = 1..10).
CONNECTED_COUNTS = (1, 1, 2, 6, 21, 112, 853, 11117, 261080, 11716571)
_FORMAT = 1


def _refine(masks: tuple[int, ...], colours: list[int]) -> list[int]:
    n = len(masks)
    k = len(set(colours))
    while True:
        sig = []
        for v in range(n):
            m = masks[v]
            nb = []
            while m:
                bit = m & -m
                m ^= bit
                nb.append(colours[bit.bit_length() - 1])
            nb.sort()
            sig.append((colours[v], tuple(nb)))
        ranks = {s: i for i, s in enumerate(sorted(set(sig)))}
        colours = [ranks[s] for s in sig]
        if len(ranks) == k:
            return colours
        k = len(ranks)


def _certificate(masks: tuple[int, ...], colours: list[int]) -> tuple[int, ...]:
    pos = colours  # discrete: colour = position
    out = [0] * len(masks)
    for v, m in enumerate(masks):
        row = 0
        while m:
            bit = m & -m
            m ^= bit
            row |= 1 << pos[bit.bit_length() - 1]
        out[pos[v]] = row
    return tuple(out)


def canonical_form(masks: tuple[int, ...]) -> tuple[int, ...]:
    """Relabelled adjacency masks; equal exactly for isomorphic graphs."""
    n = len(masks)
    best: list[tuple[int, ...] | None] = [None]

    def search(colours: list[int]) -> None:
        colours = _refine(masks, colours)
        if len(set(colours)) == n:
            cert = _certificate(masks, colours)
            if best[0] is None or cert < best[0]:
                best[0] = cert
            return
        sizes: dict[int, list[int]] = {}
        for v, c in enumerate(colours):
            sizes.setdefault(c, []).append(v)
        target = min(c for c, vs in sizes.items() if len(vs) > 1)
        cell = sizes[target]
        reps = []
        for w in cell:
            bw = 1 << w
            if any((masks[u] & ~bw) == (masks[w] & ~(1 << u)) for u in reps):
                continue
            reps.append(w)
        for v in reps:
            nxt = [2 * c + 1 for c in colours]
            nxt[v] = 2 * target
            search(nxt)

    search([bin(m).count("1") for m in masks])
    return best[0]


def _non_cut_vertices(masks: list[int], n: int) -> list[int]:
    out = []
    full = (1 << n) - 1
    for v in range(n):
        rest = full & ~(1 << v)
        if not rest:
            out.append(v)
            continue
        start = rest & -rest
        seen = frontier = start
        while frontier:
            nxt = 0
            f = frontier
            while f:
                bit = f & -f
                f ^= bit
                nxt |= masks[bit.bit_length() - 1]
            frontier = nxt & rest & ~seen
            seen |= frontier
        if seen == rest:
            out.append(v)
    return out


def _extend(parents: list[tuple[int, ...]], n: int) -> list[tuple[int, ...]]:
    """Connected graphs on ``n`` vertices from connected graphs on ``n - 1``."""
    v = n - 1
    found: set[tuple[int, ...]] = set()
    for parent in parents:
        pdeg = [bin(m).count("1") for m in parent]
        # For d >= 2 every non-cut vertex of the parent stays non-cut.
        top = min(pdeg[w] for w in _non_cut_vertices(list(parent), n - 1)) + 1
        for d in range(1, min(top, n - 1) + 1):
            for nbrs in combinations(range(n - 1), d):
                sel = sum(1 << u for u in nbrs)
                masks = [parent[u] | (1 << v if sel >> u & 1 else 0) for u in range(n - 1)]
                masks.append(sel)
                deg = pdeg[:] + [d]
                for u in nbrs:
                    deg[u] += 1
                if any(deg[u] < d for u in range(n - 1)):
                    # a lower-degree vertex exists; only acceptable if all of them are cut vertices
                    non_cut = _non_cut_vertices(masks, n)
                    if any(deg[u] < d for u in non_cut):
                        continue
                found.add(canonical_form(tuple(masks)))
    return sorted(found)


def _cache_dir() -> Path:
    return Path(os.environ.get("LOWBRANCH_CACHE", Path.home() / ".cache" / "lowbranch"))


def _load(n: int) -> list[tuple[int, ...]] | None:
    path = _cache_dir() / f"connected-{n}.v{_FORMAT}.txt"
    if not path.exists():
        return None
    rows = [tuple(int(x, 16) for x in line.split()) for line in path.read_text().splitlines() if line]
    if n <= len(CONNECTED_COUNTS) and len(rows) != CONNECTED_COUNTS[n - 1]:
        return None
    return rows


def _store(n: int, rows: list[tuple[int, ...]]) -> None:
    try:
        d = _cache_dir()
        d.mkdir(parents=True, exist_ok=True)
        tmp = d / f"connected-{n}.v{_FORMAT}.tmp{os.getpid()}"
        tmp.write_text("".join(" ".join(format(x, "x") for x in r) + "\n" for r in rows))
        tmp.replace(d / f"connected-{n}.v{_FORMAT}.txt")
    except OSError:
        pass


_memo: dict[int, list[tuple[int, ...]]] = {}


def connected_masks(n: int, use_cache: bool = True) -> list[tuple[int, ...]]:
    """Canonical adjacency masks of all connected graphs on ``n`` vertices, sorted."""
    if n < 1:
        raise ValueError("n must be positive")
    if n in _memo:
        return _memo[n]
    rows = _load(n) if use_cache and n >= 6 else None
    if rows is None:
        rows = [(0,)] if n == 1 else _extend(connected_masks(n - 1, use_cache), n)
        if use_cache and n >= 6:
            _store(n, rows)
    _memo[n] = rows
    return rows


def connected_graphs(n: int, use_cache: bool = True) -> list[Graph]:
    return [Graph.from_masks(m) for m in connected_masks(n, use_cache)]
