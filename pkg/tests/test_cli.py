from __future__ import annotations

import json
import subprocess
import sys

import pytest

from lowbranch.cli import main
from lowbranch.generators import gen_extremal
from lowbranch.io import dump_edge_list


@pytest.fixture
def extremal_file(tmp_path):
    p = tmp_path / "ext.txt"
    p.write_text(dump_edge_list(gen_extremal(1, 3)))
    return p


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_formats(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "--family", "extremal", "--s", 1, "--m", 3)
    assert code == 0 and out.splitlines()[0] == "10 13"
    code, out, _ = run(capsys, "gen", "--family", "path_of_cliques", "--s", 1, "--m", 5, "--format", "json")
    body = json.loads(out)
    assert body["schema"] == "lowbranch.graph/1" and body["n"] == 20
    dest = tmp_path / "g.dot"
    code, out, _ = run(capsys, "gen", "--family", "bipartite_lower", "--s", 1, "--part", 3, "--format", "dot", "--out", dest)
    assert code == 0 and out == "" and dest.read_text().startswith("graph")


def test_gen_random_is_deterministic(capsys):
    args = ("gen", "--family", "random_mindeg", "--n", 12, "--min-degree", 3, "--seed", 7)
    assert run(capsys, *args) == run(capsys, *args)


def test_gen_bad_parameters(capsys):
    code, _, err = run(capsys, "gen", "--family", "extremal", "--s", 1, "--m", 1)
    assert code == 2 and err.startswith("error:")
    code, _, _ = run(capsys, "gen", "--family", "extremal", "--ends", "H1,H9")
    assert code == 2


def test_solve_found_and_infeasible(capsys, extremal_file, tmp_path):
    code, out, _ = run(capsys, "solve", extremal_file, "--s", 2)
    assert code == 0
    last = out.strip().splitlines()[-1]
    assert last.startswith("branches=") and int(last.split()[0].split("=")[1]) <= 2
    tree = tmp_path / "tree.txt"
    tree.write_text(out)
    code, out, _ = run(capsys, "verify", extremal_file, tree, "--s", 2)
    assert code == 0 and out.startswith("OK")
    code, out, _ = run(capsys, "verify", extremal_file, tree, "--s", 1)
    assert code == 1 and out.startswith("FAIL")
    code, out, _ = run(capsys, "solve", extremal_file, "--s", 1)
    assert code == 1 and out.startswith("infeasible")


def test_solve_exact_json(capsys, extremal_file):
    code, out, _ = run(capsys, "solve", extremal_file, "--s", 2, "--mode", "exact", "--format", "json")
    body = json.loads(out)
    assert code == 0 and body["schema"] == "lowbranch.tree/1" and body["branches"] == 2
    code, out, _ = run(capsys, "solve", extremal_file, "--s", 1, "--mode", "exact", "--format", "json")
    assert code == 1 and json.loads(out)["minimum"] == 2


def test_solve_explain(capsys, extremal_file):
    code, out, _ = run(capsys, "solve", extremal_file, "--s", 2, "--explain", "--format", "json")
    body = json.loads(out)
    assert code == 0 and {"A", "A1", "two_matching", "star_two_matching"} <= set(body["explain"])


def test_solve_dimacs_and_errors(capsys, tmp_path):
    p = tmp_path / "c4.col"
    p.write_text("c square\np edge 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n")
    code, out, _ = run(capsys, "solve", p, "--s", 0, "--input-format", "dimacs")
    assert code == 0 and "branches=0" in out
    bad = tmp_path / "split.txt"
    bad.write_text("4 2\n0 1\n2 3\n")
    code, _, err = run(capsys, "solve", bad, "--s", 1)
    assert code == 2 and "disconnected" in err
    code, _, _ = run(capsys, "solve", tmp_path / "missing.txt", "--s", 1)
    assert code == 2


def test_partition_json_lines(capsys, tmp_path):
    p = tmp_path / "poc.txt"
    code, _, _ = run(capsys, "gen", "--family", "path_of_cliques", "--s", 1, "--m", 5, "--out", p)
    code, out, err = run(capsys, "partition", p, "--r", 5, "--gamma", "0")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(rows) == 4
    assert all(r["schema"] == "lowbranch.part/1" for r in rows)
    assert [r["vertices"] for r in rows][0] == [0, 1, 2, 3, 4]
    code, out, err = run(capsys, "partition", p, "--r", 4, "--gamma", "0")
    assert code == 0 and "reached r=4" in err


def test_experiments(capsys):
    code, out, _ = run(capsys, "experiment", "conjecture", "--n-max", 6, "--s", 1)
    assert code == 0 and "counterexamples: 0" in out
    code, out, _ = run(capsys, "experiment", "conjecture", "--n-max", 5, "--s", 2, "--sample", "random",
                       "--count", 10, "--format", "json")
    assert code == 0 and json.loads(out)["total"] == 40
    code, out, _ = run(capsys, "experiment", "star-matching-bound", "--s", 1, "--n", 10, "--samples", 5)
    assert code == 0 and "fails" in out


def test_module_entry_point_and_usage_errors():
    ok = subprocess.run([sys.executable, "-m", "lowbranch", "--help"], capture_output=True, text=True)
    assert ok.returncode == 0 and "solve" in ok.stdout
    bad = subprocess.run([sys.executable, "-m", "lowbranch", "solve"], capture_output=True, text=True)
    assert bad.returncode == 2
