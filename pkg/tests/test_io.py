import io

import pytest
from hypothesis import given

from conftest import graphs
from lowbranch.graph import Graph, SpanningTree
from lowbranch.io import (
    GraphFormatError,
    dump_edge_list,
    dump_tree,
    load_graph,
    load_tree_edges,
    parse_dimacs,
    parse_edge_list,
    to_dot,
)


def test_edge_list_roundtrip_text():
    text = "3 2\n0 1\n1 2\n"
    g = parse_edge_list(text)
    assert g.edges() == ((0, 1), (1, 2))
    assert dump_edge_list(g) == text


def test_comments_and_blank_lines():
    g = parse_edge_list("# triangle\n3 3\n\n0 1\n1 2\n# x\n0 2\n")
    assert g.m == 3


def test_dimacs_is_one_indexed():
    g = parse_dimacs("c hi\np edge 3 2\ne 1 2\ne 2 3\n")
    assert g.edges() == ((0, 1), (1, 2))


@pytest.mark.parametrize(
    "text, line",
    [
        ("3 2\n0 1\n", 1),
        ("3 1\n0 3\n", 2),
        ("3 2\n0 1\n1 0\n", 3),
        ("3 1\n1 1\n", 2),
        ("3 1\n0 x\n", 2),
        ("3 1\n0 1 2\n", 2),
    ],
)
def test_edge_list_errors_carry_line(text, line):
    with pytest.raises(GraphFormatError) as info:
        parse_edge_list(text)
    assert info.value.line == line


def test_missing_header():
    with pytest.raises(GraphFormatError):
        parse_edge_list("")
    with pytest.raises(GraphFormatError):
        parse_dimacs("e 1 2\n")


def test_load_graph_accepts_bytes_and_files():
    assert load_graph(b"2 1\n0 1\n").m == 1
    assert load_graph(io.StringIO("2 1\n0 1\n")).m == 1
    with pytest.raises(ValueError):
        load_graph("2 1\n0 1\n", "graphml")


def test_tree_dump_has_summary():
    t = SpanningTree.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    text = dump_tree(t)
    assert text.endswith("branches=1 vertices=0\n")
    n, edges = load_tree_edges(text)
    assert n == 4 and edges == [(0, 1), (0, 2), (0, 3)]


def test_dot_marks_tree():
    g = Graph.cycle(4)
    dot = to_dot(g, [(0, 1), (1, 2), (2, 3)])
    assert dot.startswith("graph G {")
    assert "0 -- 3 [style=dotted" in dot
    assert "0 -- 1 [penwidth=3]" in dot


@given(graphs(max_n=10))
def test_edge_list_roundtrip(g):
    assert parse_edge_list(dump_edge_list(g)) == g
