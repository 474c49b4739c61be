"""Sparse cuts, robustness, cut refinement and robust partitions.

All threshold comparisons are exact. Square-root thresholds such as
``count <= 3 * sqrt(alpha) * n`` are decided by squaring both sides, and
``sparsity < alpha ** (1/4)`` by comparing fourth powers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .graph import Cut, Graph, cut_edges, is_connected
from .rng import Rng

EXACT_MAX_N = 24
_CHUNK = 1 << 18
_POP8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)


class PartitionError(ValueError):
    pass


def _popcount(x: np.ndarray) -> np.ndarray:
    out = np.zeros(x.shape, dtype=np.int64)
    y = x.copy()
    while np.any(y):
        out += _POP8[y & 0xFF]
        y >>= 8
    return out


def _side(mask: int, n: int) -> frozenset[int]:
    return frozenset(v for v in range(n) if mask >> v & 1)


def _mask_chunks(n: int):
    """Subsets containing vertex 0, excluding the full set, as int64 chunks."""
    total = (1 << (n - 1)) - 1
    for lo in range(0, total, _CHUNK):
        idx = np.arange(lo, min(lo + _CHUNK, total), dtype=np.int64)
        yield (idx << 1) | 1


def _edge_arrays(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    es = np.array(g.edges(), dtype=np.int64).reshape(-1, 2)
    return es[:, 0], es[:, 1]


def min_sparsity_cut(g: Graph) -> Cut:
    """Minimum-sparsity cut by enumerating all ``2**(n-1) - 1`` cuts.

    The reported side contains vertex 0; ties go to the lexicographically
    least sorted side.
    """
    n = g.n
    if n < 2:
        raise PartitionError("a cut needs at least two vertices")
    if n > EXACT_MAX_N:
        raise PartitionError(f"exact cut search is limited to n <= {EXACT_MAX_N}")
    us, vs = _edge_arrays(g)
    best_val = None
    cands: list[int] = []
    for xs in _mask_chunks(n):
        cross = np.zeros(xs.shape, dtype=np.int64)
        for u, v in zip(us, vs):
            cross += ((xs >> u) ^ (xs >> v)) & 1
        k = _popcount(xs)
        val = cross / (k * (n - k))
        low = val.min()
        if best_val is None or low < best_val - 1e-12:
            best_val = low
            cands = []
        if low <= best_val + 1e-12:
            cands.extend(int(x) for x in xs[val <= best_val + 1e-12])
    cuts = [cut_edges(g, _side(x, n)) for x in cands]
    best = min(c.sparsity for c in cuts)
    return min((c for c in cuts if c.sparsity == best), key=lambda c: sorted(c.side))


def _best_prefix_cut(g: Graph, order: list[int]) -> Cut | None:
    n = g.n
    inside: set[int] = set()
    cross = 0
    best = None
    for i, v in enumerate(order[:-1]):
        d_in = g.degree_into(v, inside)
        cross += g.degree(v) - 2 * d_in
        inside.add(v)
        k = i + 1
        val = Fraction(cross, k * (n - k))
        if best is None or val < best[0]:
            best = (val, frozenset(inside))
    return cut_edges(g, best[1]) if best else None


def _canonical(g: Graph, side) -> Cut:
    side = frozenset(side)
    if 0 not in side:
        side = frozenset(range(g.n)) - side
    return cut_edges(g, side)


def _hill_climb(g: Graph, cut: Cut, max_rounds: int) -> Cut:
    n = g.n
    side = set(cut.side)
    cross = cut.crossing_edges
    for _ in range(max_rounds):
        improved = False
        for v in range(n):
            k = len(side)
            inner = g.degree_into(v, side)
            outer = g.degree(v) - inner
            if v in side:
                if k == 1:
                    continue
                new_cross = cross - outer + inner
                new_k = k - 1
            else:
                if k == n - 1:
                    continue
                new_cross = cross - inner + outer
                new_k = k + 1
            if Fraction(new_cross, new_k * (n - new_k)) < Fraction(cross, k * (n - k)):
                side ^= {v}
                cross = new_cross
                improved = True
        if not improved:
            break
    return _canonical(g, side)


def heuristic_sparse_cut(g: Graph, seed: int = 0, restarts: int = 4) -> Cut | None:
    """Spectral sweep cuts plus single-vertex moves; returns the sparsest cut seen."""
    n = g.n
    if n < 2:
        return None
    if not is_connected(g):
        return _canonical(g, g.components()[0])
    deg = np.array(g.degrees(), dtype=float)
    adj = np.zeros((n, n))
    for u, v in g.edges():
        adj[u, v] = adj[v, u] = 1.0
    inv = 1.0 / np.sqrt(deg)
    lap = np.eye(n) - inv[:, None] * adj * inv[None, :]
    _, vecs = np.linalg.eigh(lap)
    starts = []
    for col in range(1, min(4, n)):
        f = vecs[:, col] * inv
        order = sorted(range(n), key=lambda v: (round(float(f[v]), 12), v))
        c = _best_prefix_cut(g, order)
        if c is not None:
            starts.append(c)
    rng = Rng(seed)
    for _ in range(restarts):
        k = rng.integer(1, n - 1)
        starts.append(cut_edges(g, rng.sample(range(n), k)))
    best = None
    for c in starts:
        c = _hill_climb(g, c, 4 * n)
        if best is None or c.sparsity < best.sparsity or (
            c.sparsity == best.sparsity and sorted(c.side) < sorted(best.side)
        ):
            best = c
    return best


def find_sparse_cut(g: Graph, alpha, mode: str = "exact", seed: int = 0) -> Cut | None:
    """An ``alpha``-sparse cut, or ``None``.

    In exact mode ``None`` certifies that no such cut exists and a returned cut
    has minimum sparsity. In heuristic mode any returned cut is a genuine
    ``alpha``-sparse cut but ``None`` proves nothing.
    """
    alpha = Fraction(alpha)
    if mode == "exact":
        if g.n < 2:
            return None
        c = min_sparsity_cut(g)
    elif mode == "heuristic":
        c = heuristic_sparse_cut(g, seed)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return c if c is not None and c.sparsity < alpha else None


@dataclass(frozen=True)
class RobustnessClaim:
    eta: Fraction
    alpha: Fraction
    mode: str
    robust: bool
    degree_ok: bool
    witness: Cut | None
    certified: bool


def check_robust(g: Graph, eta, alpha, mode: str = "exact", seed: int = 0) -> RobustnessClaim:
    """``(eta, alpha)``-robustness: ``delta(g) >= eta*n`` and no ``alpha``-sparse cut."""
    eta, alpha = Fraction(eta), Fraction(alpha)
    degree_ok = g.min_degree() >= eta * g.n
    witness = find_sparse_cut(g, alpha, mode, seed)
    robust = degree_ok and witness is None
    certified = mode == "exact" or not robust
    return RobustnessClaim(eta, alpha, mode, robust, degree_ok, witness, certified)


# ---------------------------------------------------------------------------
# Square-root threshold helpers
# ---------------------------------------------------------------------------

def at_least_minus_sqrt(lhs, base, coef, alpha) -> bool:
    """``lhs >= base - coef * sqrt(alpha)`` exactly (``coef >= 0``)."""
    gap = Fraction(base) - Fraction(lhs)
    return gap <= 0 or Fraction(coef) ** 2 * Fraction(alpha) >= gap * gap


def at_most_sqrt(count, coef, alpha, n) -> bool:
    """``count <= coef * sqrt(alpha) * n`` exactly."""
    return Fraction(count) ** 2 <= Fraction(coef) ** 2 * Fraction(alpha) * n * n


# ---------------------------------------------------------------------------
# Cut refinement
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RefinedCut:
    cut: Cut
    stripped: tuple[int, ...]
    moved: tuple[int, ...]
    hypothesis_ok: bool
    conclusions: dict = field(compare=False)

    @property
    def quarter_root_sparse(self) -> bool:
        return self.cut.is_quarter_root_sparse(self.conclusions["alpha"])

    @property
    def certified(self) -> bool:
        c = self.conclusions
        return self.hypothesis_ok and c["quarter_root_sparse"] and c["sizes"] and c["degrees"]


def refine_sparse_cut(g: Graph, cut: Cut, alpha, delta) -> RefinedCut:
    """Clean up an ``alpha``-sparse cut.

    Strip the low-degree set ``V0 = {v : d(v) < delta*n}`` and, on each side,
    the vertices with at least ``sqrt(alpha)*n`` neighbours across. The
    stripped vertices are then put back in index order, each on the side
    holding more of its neighbours (ties to the smaller side, then to the side
    of vertex 0), and finally moved while some stripped vertex has strictly more
    neighbours on the other side. The cut never gets more crossing edges from
    a move, so the loop ends.
    """
    alpha, delta = Fraction(alpha), Fraction(delta)
    n = g.n
    if cut.n != n:
        raise PartitionError("cut belongs to a different graph")
    if not cut.sparsity < alpha:
        raise PartitionError(f"cut sparsity {cut.sparsity} is not below alpha={alpha}")
    sides = [set(cut.side), set(cut.other())]
    low = {v for v in range(n) if g.degree(v) < delta * n}
    heavy = set()
    for i in (0, 1):
        for v in sides[i]:
            across = g.degree_into(v, sides[1 - i])
            if across * across >= alpha * n * n:
                heavy.add(v)
    stripped = sorted(low | heavy)
    origin = {v: (0 if v in sides[0] else 1) for v in stripped}
    core = [sides[0] - set(stripped), sides[1] - set(stripped)]
    placed = [set(core[0]), set(core[1])]
    for v in stripped:
        a, b = g.degree_into(v, placed[0]), g.degree_into(v, placed[1])
        if a != b:
            i = 0 if a > b else 1
        elif len(placed[0]) != len(placed[1]):
            i = 0 if len(placed[0]) < len(placed[1]) else 1
        else:
            i = 0
        placed[i].add(v)
    changed = True
    while changed:
        changed = False
        for v in stripped:
            i = 0 if v in placed[0] else 1
            if g.degree_into(v, placed[1 - i]) > g.degree_into(v, placed[i]) and len(placed[i]) > 1:
                placed[i].discard(v)
                placed[1 - i].add(v)
                changed = True
    collapsed = not placed[0] or not placed[1]
    if collapsed:
        # every vertex was stripped onto one side; keep the input cut
        placed = sides
    new = _canonical(g, placed[0])
    moved = tuple(v for v in stripped if (0 if v in placed[0] else 1) != origin[v])
    hypothesis_ok = not collapsed and at_most_sqrt(len(low), 4, alpha, n)
    conclusions = {"alpha": alpha, "quarter_root_sparse": new.is_quarter_root_sparse(alpha)}
    base = delta * n
    dmin = g.min_degree()
    sizes_ok = True
    degrees_ok = True
    for part in (new.side, new.other()):
        if not at_least_minus_sqrt(len(part), base, 3 * n, alpha):
            sizes_ok = False
        sub_min = min(g.degree_into(v, part) for v in part)
        if 2 * sub_min < dmin:
            degrees_ok = False
        weak = sum(1 for v in part if not at_least_minus_sqrt(g.degree_into(v, part), base, 3 * n, alpha))
        if not at_most_sqrt(weak, 3, alpha, n):
            degrees_ok = False
    conclusions["sizes"] = sizes_ok
    conclusions["degrees"] = degrees_ok
    return RefinedCut(new, tuple(stripped), moved, hypothesis_ok, conclusions)


# ---------------------------------------------------------------------------
# Robust partition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlphaSchedule:
    """Thresholds ``alpha_j = top * ratio**(r - j)`` for ``j = 1..r``."""

    top: Fraction
    ratio: Fraction = Fraction(1, 16)

    def value(self, j: int, r: int) -> Fraction:
        if not 1 <= j <= r:
            raise ValueError(f"schedule index {j} outside 1..{r}")
        return Fraction(self.top) * Fraction(self.ratio) ** (r - j)

    @classmethod
    def default(cls, gamma) -> "AlphaSchedule":
        return cls(Fraction(gamma) ** 4 / 256, Fraction(1, 16))


DESK_SCHEDULE = AlphaSchedule(Fraction(1), Fraction(1, 4))


@dataclass(frozen=True)
class PartStats:
    vertices: tuple[int, ...]
    min_degree: int
    exceptional: int
    alpha_certified: bool


@dataclass(frozen=True)
class RobustPartition:
    parts: tuple[tuple[int, ...], ...]
    stats: tuple[PartStats, ...]
    r: int
    gamma: Fraction
    alpha: Fraction
    alpha_prev: Fraction
    mode: str
    degree_hypothesis_ok: bool
    cap_reached: bool
    history: tuple = ()

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def alpha_prime(self) -> float:
        """``3 * sqrt(alpha_k)``; comparisons use :meth:`exceptional_within_bound`."""
        return 3 * float(self.alpha_prev) ** 0.5

    def exceptional_within_bound(self, count: int, n: int) -> bool:
        return at_most_sqrt(count, 3, self.alpha_prev, n)


def _part_stats(g: Graph, part, threshold: Fraction, certified: bool) -> PartStats:
    ps = set(part)
    degs = [g.degree_into(v, ps) for v in sorted(ps)]
    return PartStats(
        tuple(sorted(ps)),
        min(degs),
        sum(1 for d in degs if d < threshold),
        certified,
    )


def robust_partition(
    g: Graph,
    r: int,
    gamma,
    mode: str = "exact",
    schedule: AlphaSchedule | None = None,
    seed: int = 0,
) -> RobustPartition:
    """Split along sparse cuts until no part has one at the current threshold.

    With ``j`` parts the test threshold is ``alpha_{j+1}``. A found cut is
    cleaned with :func:`refine_sparse_cut` (using ``delta*|U| = (1/r +
    gamma/2)*n``) before splitting. Reaching ``r`` parts stops the loop and
    sets ``cap_reached``, which only happens outside the hypotheses.
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    gamma = Fraction(gamma)
    if schedule is None:
        schedule = AlphaSchedule.default(gamma)
    n = g.n
    threshold = (Fraction(1, r) + gamma / 2) * n
    degree_ok = g.min_degree() >= (Fraction(1, r) + gamma) * n
    parts: list[tuple[int, ...]] = [tuple(range(n))]
    history = []
    cap = False
    j = 1
    while True:
        if j + 1 > r:
            cap = True
            alpha = schedule.value(r, r)
            break
        alpha = schedule.value(j + 1, r)
        hit = None
        for idx, part in enumerate(parts):
            sub, labels = g.induced(part)
            c = find_sparse_cut(sub, alpha, mode, seed)
            if c is not None:
                hit = (idx, sub, labels, c)
                break
        if hit is None:
            break
        idx, sub, labels, c = hit
        delta = threshold / sub.n
        refined = refine_sparse_cut(sub, c, alpha, min(delta, Fraction(1)))
        left = tuple(sorted(labels[v] for v in refined.cut.side))
        right = tuple(sorted(labels[v] for v in refined.cut.other()))
        history.append({
            "step": j,
            "alpha": alpha,
            "part": idx,
            "sparsity": c.sparsity,
            "refined_sparsity": refined.cut.sparsity,
            "moved": tuple(labels[v] for v in refined.moved),
        })
        parts[idx:idx + 1] = [left, right]
        parts.sort()
        j += 1
    stats = []
    for part in parts:
        sub, _ = g.induced(part)
        certified = mode == "exact" and find_sparse_cut(sub, alpha, "exact") is None
        stats.append(_part_stats(g, part, threshold, certified))
    alpha_prev = schedule.value(min(j, r), r)
    return RobustPartition(
        tuple(parts), tuple(stats), r, gamma, alpha, alpha_prev, mode, degree_ok, cap, tuple(history)
    )


def partition_conclusions(g: Graph, rp: RobustPartition) -> dict[str, bool]:
    """Recompute the three partition guarantees for ``rp``.

    (i) every part exceeds ``(1/r + gamma/2) n``; (ii) each part has minimum
    degree at least ``delta(g) / 2**(k-1)`` and at most ``alpha' n`` vertices
    below ``(1/r + gamma/2) n`` inside it; (iii) no part has an ``alpha``-sparse
    cut (exact enumeration; ``False`` when a part is too large to enumerate).
    """
    n = g.n
    bound = (Fraction(1, rp.r) + rp.gamma / 2) * n
    k = rp.k
    dmin = g.min_degree()
    size_ok = all(len(p) > bound for p in rp.parts)
    deg_ok = True
    for p in rp.parts:
        ps = set(p)
        degs = [g.degree_into(v, ps) for v in p]
        if min(degs) * 2 ** (k - 1) < dmin:
            deg_ok = False
        weak = sum(1 for d in degs if d < bound)
        if not rp.exceptional_within_bound(weak, n):
            deg_ok = False
    cut_ok = True
    for p in rp.parts:
        sub, _ = g.induced(p)
        if sub.n > EXACT_MAX_N or find_sparse_cut(sub, rp.alpha, "exact") is not None:
            cut_ok = False
    return {"i": size_ok, "ii": deg_ok, "iii": cut_ok}


# ---------------------------------------------------------------------------
# Near-bipartite detection
# ---------------------------------------------------------------------------

def near_bipartite(g: Graph, beta, mode: str = "exact", seed: int = 0) -> frozenset[int] | None:
    """``X`` with ``e(X) < beta n^2`` and ``e(V - X) < beta n^2``, or ``None``.

    Exact mode minimises ``max(e(X), e(V - X))`` over all proper splits with
    vertex 0 in ``X`` (ties to the lexicographically least ``X``), so ``None``
    is a certificate. Heuristic mode runs max-cut local search.
    """
    beta = Fraction(beta)
    n = g.n
    limit = beta * n * n
    if n < 2:
        return None
    if mode == "exact":
        if n > EXACT_MAX_N:
            raise PartitionError(f"exact near-bipartite search is limited to n <= {EXACT_MAX_N}")
        us, vs = _edge_arrays(g)
        best = None
        for xs in _mask_chunks(n):
            inside = np.zeros(xs.shape, dtype=np.int64)
            outside = np.zeros(xs.shape, dtype=np.int64)
            for u, v in zip(us, vs):
                bu, bv = (xs >> u) & 1, (xs >> v) & 1
                inside += bu & bv
                outside += (1 - bu) & (1 - bv)
            worst = np.maximum(inside, outside)
            low = int(worst.min())
            if best is None or low < best[0]:
                best = (low, [int(x) for x in xs[worst == low]])
            elif low == best[0]:
                best[1].extend(int(x) for x in xs[worst == low])
        value, cands = best
        if value >= limit:
            return None
        return min((_side(x, n) for x in cands), key=sorted)
    if mode != "heuristic":
        raise ValueError(f"unknown mode {mode!r}")
    rng = Rng(seed)
    best_x = None
    best_val = None
    for attempt in range(8):
        side = {v for v in range(n) if rng.below(2)} if attempt else set(range(0, n, 2))
        changed = True
        while changed:
            changed = False
            for v in range(n):
                same = g.degree_into(v, side) if v in side else g.degree(v) - g.degree_into(v, side)
                other = g.degree(v) - same
                if same > other:
                    side ^= {v}
                    changed = True
        e_in = g.edges_within(side)
        e_out = g.edges_within(set(range(n)) - side)
        val = max(e_in, e_out)
        if best_val is None or val < best_val:
            best_val, best_x = val, frozenset(side)
    if best_val < limit and best_x and len(best_x) < n:
        return best_x if 0 in best_x else frozenset(range(n)) - best_x
    return None
