from __future__ import annotations

import pytest
from hypothesis import given

from conftest import graphs
from lowbranch.graph import Graph
from lowbranch.hamilton import anchor, hamiltonian_cycle, hamiltonian_path, longest_cycles, rotation_extension
from lowbranch.rng import Rng

PETERSEN = Graph(
    10,
    [(i, (i + 1) % 5) for i in range(5)]
    + [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    + [(i, i + 5) for i in range(5)],
)


def is_cycle(g: Graph, cyc) -> bool:
    return len(set(cyc)) == len(cyc) >= 3 and all(g.has_edge(cyc[i - 1], cyc[i]) for i in range(len(cyc)))


def is_path(g: Graph, path) -> bool:
    return len(set(path)) == len(path) and all(g.has_edge(a, b) for a, b in zip(path, path[1:]))


def test_anchor_prefers_high_degree_then_low_index():
    assert anchor(Graph(4, [(0, 1), (1, 2), (2, 3)])) == 1
    assert anchor(Graph(3, [(0, 1), (1, 2), (0, 2)])) == 0


@pytest.mark.parametrize("g", [Graph.complete(7), Graph.cycle(9), Graph(6, [(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)])])
def test_hamiltonian_cycle_found(g):
    cyc = hamiltonian_cycle(g)
    assert cyc is not None and len(cyc) == g.n and is_cycle(g, cyc)


def test_petersen_has_no_hamiltonian_cycle_but_a_path():
    assert hamiltonian_cycle(PETERSEN) is None
    assert len(longest_cycles(PETERSEN)[0]) == 9
    path = hamiltonian_path(PETERSEN)
    assert path is not None and len(path) == 10 and is_path(PETERSEN, path)


def test_star_has_no_cycles_or_long_paths():
    star = Graph(5, [(0, i) for i in range(1, 5)])
    assert longest_cycles(star) == []
    assert hamiltonian_path(star) is None


def test_deterministic_for_fixed_seed():
    g = Graph(12, [(i, j) for i in range(12) for j in range(i + 1, 12) if (i * j + i + j) % 3])
    assert hamiltonian_cycle(g, seed=5) == hamiltonian_cycle(g, seed=5)


@given(graphs(1, 9, connected=True))
def test_outputs_are_genuine(g):
    path, cyc = rotation_extension(g, Rng(1))
    assert is_path(g, path)
    if cyc is not None:
        assert is_cycle(g, cyc)
    for c in longest_cycles(g, restarts=4):
        assert is_cycle(g, c)
    hp = hamiltonian_path(g)
    if hp is not None:
        assert len(hp) == g.n and is_path(g, hp)


@given(graphs(3, 9))
def test_dirac_graphs_are_hamiltonian(g):
    # minimum degree n/2 guarantees a Hamiltonian cycle
    if 2 * g.min_degree() >= g.n:
        cyc = hamiltonian_cycle(g)
        assert cyc is not None and is_cycle(g, cyc) and len(cyc) == g.n
