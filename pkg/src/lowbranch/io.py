"""Reading and writing graphs and trees.

Edge-list: header ``n m`` then ``m`` lines ``u v`` (0-indexed).
DIMACS: ``p edge n m`` then ``e u v`` lines (1-indexed on the wire).
"""

from __future__ import annotations

import io
from typing import IO, Iterable

from .graph import Graph, GraphError, SpanningTree

FORMATS = ("edge-list", "dimacs")


class GraphFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _text(source: str | bytes | IO) -> str:
    if isinstance(source, bytes):
        return source.decode("ascii")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("ascii") if isinstance(data, bytes) else data


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise GraphFormatError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def _build(n: int, edges: list[tuple[int, int, int]]) -> Graph:
    seen: dict[tuple[int, int], int] = {}
    for u, v, lineno in edges:
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"vertex out of range in edge ({u}, {v}) for n={n}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key} (first on line {seen[key]})", lineno)
        seen[key] = lineno
    try:
        return Graph(n, ((u, v) for u, v, _ in edges))
    except GraphError as exc:  # pragma: no cover - guarded above
        raise GraphFormatError(str(exc)) from exc


def parse_edge_list(text: str, *, allow_trailer: bool = False) -> Graph:
    header = None
    edges: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if allow_trailer and line.startswith("branches="):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphFormatError(f"expected two fields, got {len(tokens)}", lineno)
        a, b = _ints(tokens, lineno)
        if header is None:
            if a < 0 or b < 0:
                raise GraphFormatError("negative header value", lineno)
            header = (a, b, lineno)
        else:
            edges.append((a, b, lineno))
    if header is None:
        raise GraphFormatError("missing 'n m' header")
    n, m, hline = header
    if len(edges) != m:
        raise GraphFormatError(f"header declares {m} edges but {len(edges)} were given", hline)
    return _build(n, edges)


def parse_dimacs(text: str) -> Graph:
    header = None
    edges: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        if tokens[0] == "p":
            if header is not None:
                raise GraphFormatError("second problem line", lineno)
            if len(tokens) != 4 or tokens[1] not in ("edge", "col"):
                raise GraphFormatError("expected 'p edge n m'", lineno)
            n, m = _ints(tokens[2:], lineno)
            header = (n, m, lineno)
        elif tokens[0] == "e":
            if header is None:
                raise GraphFormatError("edge before problem line", lineno)
            if len(tokens) != 3:
                raise GraphFormatError("expected 'e u v'", lineno)
            u, v = _ints(tokens[1:], lineno)
            edges.append((u - 1, v - 1, lineno))
        else:
            raise GraphFormatError(f"unknown line type {tokens[0]!r}", lineno)
    if header is None:
        raise GraphFormatError("missing 'p edge n m' line")
    n, m, hline = header
    if len(edges) != m:
        raise GraphFormatError(f"header declares {m} edges but {len(edges)} were given", hline)
    return _build(n, edges)


def load_graph(source: str | bytes | IO, format: str = "edge-list") -> Graph:
    """Parse a graph from text, bytes or a file object."""
    text = _text(source)
    if format == "edge-list":
        return parse_edge_list(text)
    if format == "dimacs":
        return parse_dimacs(text)
    raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")


def read_graph(path: str, format: str | None = None) -> Graph:
    if format is None:
        format = "dimacs" if path.endswith((".dimacs", ".col", ".clq")) else "edge-list"
    with open(path, "rb") as fh:
        return load_graph(fh, format)


def dump_edge_list(g: Graph) -> str:
    """Canonical edge-list text: sorted edges, smaller endpoint first, LF endings."""
    out = io.StringIO()
    out.write(f"{g.n} {g.m}\n")
    for u, v in g.edges():
        out.write(f"{u} {v}\n")
    return out.getvalue()


def dump_tree(t: SpanningTree) -> str:
    """Tree as canonical edge-list followed by a ``branches=`` summary line."""
    body = dump_edge_list(Graph(t.n, t.edges))
    verts = ",".join(str(v) for v in sorted(t.branch_vertices))
    return body + f"branches={t.branch_count} vertices={verts}\n"


def load_tree_edges(source: str | bytes | IO) -> tuple[int, list[tuple[int, int]]]:
    """Read the edge list written by :func:`dump_tree` (the summary line is ignored)."""
    g = parse_edge_list(_text(source), allow_trailer=True)
    return g.n, list(g.edges())


def to_dot(g: Graph, tree_edges: Iterable[tuple[int, int]] | None = None, name: str = "G") -> str:
    """Graphviz DOT; with a tree, tree edges are bold and branch vertices filled."""
    tree = {(min(u, v), max(u, v)) for u, v in tree_edges} if tree_edges is not None else set()
    deg = [0] * g.n
    for u, v in tree:
        deg[u] += 1
        deg[v] += 1
    lines = [f"graph {name} {{"]
    for v in range(g.n):
        if tree and deg[v] >= 3:
            lines.append(f'  {v} [label="{v}", style=filled, fillcolor=black, fontcolor=white];')
        else:
            lines.append(f'  {v} [label="{v}"];')
    for u, v in g.edges():
        if not tree:
            lines.append(f"  {u} -- {v};")
        elif (u, v) in tree:
            lines.append(f"  {u} -- {v} [penwidth=3];")
        else:
            lines.append(f"  {u} -- {v} [style=dotted, color=gray];")
    lines.append("}")
    return "\n".join(lines) + "\n"
