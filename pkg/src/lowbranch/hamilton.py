"""Rotation-extension search for long paths and cycles.

A path is grown from an anchor. When its end has a neighbour off the path the
path is extended; otherwise it is rotated: for a neighbour ``path[i]`` of the
end, the suffix after ``i`` is reversed, giving a new end ``path[i+1]``.
Rotations that expose an end with an off-path neighbour are preferred. Every
chord from the end back into the path closes a cycle, and the longest one seen
is kept.
"""

from __future__ import annotations

from .graph import Graph
from .rng import Rng


def anchor(g: Graph) -> int:
    """Vertex of maximum degree, lowest index on ties."""
    return max(range(g.n), key=lambda v: (g.degree(v), -v))


def rotation_extension(
    g: Graph,
    rng: Rng,
    start: int | None = None,
    max_steps: int | None = None,
    want_cycle: bool = True,
    patience: int | None = None,
) -> tuple[list[int], list[int] | None]:
    """One seeded run; returns ``(longest path seen, longest cycle seen)``.

    Stops early on a Hamiltonian cycle (``want_cycle``) or a Hamiltonian path
    (otherwise), and gives up after ``patience`` steps without progress.
    """
    n = g.n
    if n == 0:
        return [], None
    if start is None:
        start = anchor(g)
    if max_steps is None:
        max_steps = 4 * n * n + 16
    if patience is None:
        patience = 8 * n + 16
    adj = [sorted(g.neighbors(v)) for v in range(n)]
    masks = g.masks
    path = [start]
    pos = {start: 0}
    on = 1 << start
    best_path = list(path)
    best_cycle: list[int] | None = None

    def note_cycle() -> bool:
        # only called when every neighbour of the end is on the path
        nonlocal best_cycle
        first = min(pos[w] for w in adj[path[-1]]) if adj[path[-1]] else len(path)
        if len(path) - first >= 3 and (best_cycle is None or len(path) - first > len(best_cycle)):
            best_cycle = path[first:]
            return len(best_cycle) == n
        return False

    progress = (1, 0)
    last_gain = 0
    for step in range(max_steps):
        now = (len(best_path), len(best_cycle) if best_cycle else 0)
        if now > progress:
            progress, last_gain = now, step
        elif step - last_gain > patience:
            break
        end = path[-1]
        if masks[end] & ~on:
            outs = [w for w in adj[end] if not on >> w & 1]
            w = outs[rng.below(len(outs))]
            pos[w] = len(path)
            path.append(w)
            on |= 1 << w
            if len(path) > len(best_path):
                best_path = list(path)
            if len(path) == n and not want_cycle:
                return best_path, best_cycle
            continue
        if note_cycle() and want_cycle:
            return path, best_cycle
        if len(path) == n and not want_cycle:
            return path, best_cycle
        head_out = len(path) > 1 and masks[path[0]] & ~on
        if head_out and rng.below(4) == 0:
            path.reverse()
            pos = {v: i for i, v in enumerate(path)}
            continue
        last = len(path) - 2
        pivots = [pos[w] for w in adj[end] if pos[w] < last]
        if not pivots:
            if head_out:
                path.reverse()
                pos = {v: i for i, v in enumerate(path)}
                continue
            break
        if want_cycle and len(path) == n:
            first = masks[path[0]]
            good = [i for i in pivots if first >> path[i + 1] & 1]
            if not good:
                good = [i for i in pivots if masks[path[i + 1]] & ~on]
        else:
            good = [i for i in pivots if masks[path[i + 1]] & ~on]
        choices = good or pivots
        i = choices[rng.below(len(choices))]
        tail = path[i + 1:]
        tail.reverse()
        path[i + 1:] = tail
        for j in range(i + 1, len(path)):
            pos[path[j]] = j
    if not masks[path[-1]] & ~on:
        note_cycle()
    return best_path, best_cycle


def longest_cycles(
    g: Graph,
    seed: int = 0,
    restarts: int = 32,
    max_steps: int | None = None,
) -> list[list[int]]:
    """Best cycle of each restart (distinct, longest first); stops at a Hamiltonian cycle."""
    if g.n < 3:
        return []
    root = Rng(seed)
    start = anchor(g)
    found: list[list[int]] = []
    seen: set[frozenset[int]] = set()
    for k in range(restarts):
        _, cycle = rotation_extension(g, root.spawn(k), start, max_steps)
        if cycle is None:
            continue
        key = frozenset(cycle)
        if key not in seen:
            seen.add(key)
            found.append(cycle)
        if len(cycle) == g.n:
            break
    found.sort(key=lambda c: -len(c))
    return found


def hamiltonian_cycle(g: Graph, seed: int = 0, restarts: int = 32) -> list[int] | None:
    cycles = longest_cycles(g, seed, restarts)
    return cycles[0] if cycles and len(cycles[0]) == g.n else None


def hamiltonian_path(g: Graph, seed: int = 0, restarts: int = 8) -> list[int] | None:
    """Seeded search for a Hamiltonian path; ``None`` is not a proof of absence."""
    if g.n == 0:
        return []
    root = Rng(seed)
    starts = [anchor(g)] + sorted(range(g.n), key=lambda v: (g.degree(v), v))[:2]
    for k in range(restarts):
        path, _ = rotation_extension(g, root.spawn(k), starts[k % len(starts)], want_cycle=False)
        if len(path) == g.n:
            return path
    return None
