"""``lowbranch`` command line: gen, solve, partition, verify, experiment.

Exit codes: 0 success, 1 negative result, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import io as gio
from .assembly import SolveConfig, solve
from .experiments import RandomSample, check_conjecture, star_matching_bound
from .generators import GADGETS, InstanceSpec, ParameterError
from .graph import GraphError, SpanningTree, is_connected, verify_tree
from .matchings import gallai_edmonds_sets, max_two_matching
from .oracle import BNB_MAX_N, OracleError, min_branch_tree
from .partition import DESK_SCHEDULE, AlphaSchedule, robust_partition
from .stars import HypothesisViolation, StageFailure, star_two_matching

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def _read(path: str, fmt: str | None):
    if path == "-":
        return gio.load_graph(sys.stdin.read(), fmt or "edge-list")
    return gio.read_graph(path, fmt)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------

def cmd_gen(args) -> int:
    ends = tuple(args.ends.split(","))
    if len(ends) != 2 or any(e not in GADGETS for e in ends):
        raise UsageError(f"--ends takes two of {GADGETS} separated by a comma")
    spec = InstanceSpec(
        family=args.family, s=args.s, m=args.m, n=args.n or 0, min_degree=args.min_degree or 0,
        seed=args.seed, end_gadget=ends, part=args.part or 0,
    )
    g = spec.build()
    if args.format == "json":
        text = _dumps({"schema": "lowbranch.graph/1", "n": g.n, "edges": [list(e) for e in g.edges()]}) + "\n"
    elif args.format == "dot":
        text = gio.to_dot(g)
    else:
        text = gio.dump_edge_list(g)
    _write(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

def _explain(g) -> dict:
    ge = gallai_edmonds_sets(g)
    tm = max_two_matching(g, ge)
    return {
        "A": sorted(ge.A),
        "A1": sorted(ge.A1),
        "two_matching": {"edges": [list(e) for e in tm.edges], "cycles": [list(c) for c in tm.odd_cycles]},
    }


def _tree_output(g, tree: SpanningTree, fmt: str, extra: dict) -> str:
    if fmt == "dot":
        return gio.to_dot(g, tree.edges)
    if fmt == "json":
        body = {
            "schema": "lowbranch.tree/1",
            "n": tree.n,
            "edges": [list(e) for e in tree.edges],
            "branches": tree.branch_count,
            "branch_vertices": sorted(tree.branch_vertices),
        }
        body.update(extra)
        return _dumps(body) + "\n"
    return gio.dump_tree(tree)


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def cmd_solve(args) -> int:
    g = _read(args.input, args.input_format)
    if not is_connected(g):
        print("error: graph is disconnected", file=sys.stderr)
        return EXIT_ERROR
    extra: dict = {}
    if args.explain:
        extra["explain"] = _explain(g)
        try:
            extra["explain"]["star_two_matching"] = star_two_matching(g, args.s).to_json()
        except (StageFailure, HypothesisViolation) as exc:
            extra["explain"]["star_two_matching"] = {"error": str(exc)}
    if args.mode == "exact":
        if g.n > BNB_MAX_N:
            raise UsageError(f"exact mode is limited to n <= {BNB_MAX_N}")
        res = min_branch_tree(g)
        extra["method"] = res.method
        if res.min_branches > args.s:
            msg = f"infeasible: minimum is {res.min_branches}"
            _write(_dumps({"schema": "lowbranch.tree/1", "status": "infeasible",
                           "minimum": res.min_branches, **extra}) + "\n" if args.format == "json" else msg + "\n",
                   args.out)
            return EXIT_NEGATIVE
        _write(_tree_output(g, res.witness, args.format, {"status": "found", "stage": "oracle", **extra}), args.out)
        return EXIT_OK
    cfg = SolveConfig(seed=args.seed, fallback=not args.no_fallback, oracle=not args.no_fallback)
    res = solve(g, args.s, cfg)
    extra["trace"] = _jsonable(res.trace)
    if res.ok:
        text = _tree_output(g, res.tree, args.format, {"status": "found", "stage": res.stage, **extra})
        if args.explain and args.format == "text":
            sys.stderr.write(_dumps(_jsonable(extra)) + "\n")
        _write(text, args.out)
        return EXIT_OK
    if res.status == "infeasible":
        msg = f"infeasible: more than {args.s} branch vertices needed"
    else:
        msg = f"heuristic failure: no tree with at most {args.s} branch vertices found"
    if args.format == "json":
        _write(_dumps({"schema": "lowbranch.tree/1", "status": res.status, **extra}) + "\n", args.out)
    else:
        _write(msg + "\n", args.out)
    return EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# partition / verify
# ---------------------------------------------------------------------------

def cmd_partition(args) -> int:
    g = _read(args.input, args.input_format)
    schedule = DESK_SCHEDULE if args.schedule == "desk" else AlphaSchedule.default(args.gamma)
    rp = robust_partition(g, args.r, args.gamma, args.mode, schedule, args.seed)
    lines = []
    for i, st in enumerate(rp.stats):
        lines.append(_dumps({
            "schema": "lowbranch.part/1",
            "part": i,
            "vertices": list(st.vertices),
            "min_degree": st.min_degree,
            "exceptional": st.exceptional,
            "alpha_certified": st.alpha_certified,
        }))
    if rp.cap_reached:
        print(f"warning: partition reached r={args.r} parts; hypotheses violated", file=sys.stderr)
    if not rp.degree_hypothesis_ok:
        print("warning: minimum degree is below (1/r + gamma) n", file=sys.stderr)
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    g = _read(args.graph, args.input_format)
    with open(args.tree, "rb") as fh:
        n, edges = gio.load_tree_edges(fh)
    problems = [] if n == g.n else [f"tree has {n} vertices, graph has {g.n}"]
    problems += verify_tree(g, edges, args.s)
    if problems:
        for p in problems:
            print(f"FAIL: {p}")
        return EXIT_NEGATIVE
    t = SpanningTree.from_edges(g.n, edges)
    print(f"OK: spanning tree, branches={t.branch_count}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# experiment
# ---------------------------------------------------------------------------

def cmd_conjecture(args) -> int:
    sample = "exhaustive" if args.sample == "exhaustive" else RandomSample(args.count, args.seed)
    rep = check_conjecture(args.n_max, args.s, sample)
    if args.format == "json":
        _write(_dumps(rep.to_json()) + "\n", args.out)
    else:
        lines = [f"conjecture s={args.s} n<={args.n_max} sample={rep.sample}"]
        lines += [f"n={n}: {c} graphs" for n, c in sorted(rep.checked.items())]
        lines.append(f"checked: {rep.total}")
        lines.append(f"counterexamples: {len(rep.counterexamples)}")
        for n, es in rep.counterexamples:
            lines.append(f"counterexample n={n} edges={[list(e) for e in es]}")
        _write("\n".join(lines) + "\n", args.out)
    return EXIT_NEGATIVE if rep.counterexamples else EXIT_OK


def cmd_star_bound(args) -> int:
    rep = star_matching_bound(args.s, args.n, args.samples, args.seed)
    if args.format == "json":
        _write(_dumps(rep) + "\n", args.out)
        return EXIT_OK
    lines = [
        f"star-matching bound s={rep['s']} n={rep['n']}",
        f"degree region: n/(2s+2)={rep['lower_bound']} .. n/(sqrt(s)+1)^2={rep['star_bound']}",
    ]
    wit = rep.get("witness")
    if wit:
        verdict = "fails" if wit.get("fails") else "holds"
        lines.append(
            f"witness bipartite_lower({rep['s']},{wit['part']}): min A-degree {wit['min_degree_A']} "
            f"at degree bound {wit['degree_bound']}; min t={wit.get('min_t', wit.get('greedy_t'))}; {verdict}"
        )
    for row in rep["search"]:
        lines.append(f"degree {row['degree']}: {row['failures']}/{row['instances']} instances fail")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lowbranch", description="Spanning trees with few branch vertices.")
    p.add_argument("--threads", type=_positive, default=1,
                   help="worker threads (results do not depend on it)")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("--family", required=True, choices=["extremal", "path_of_cliques", "bipartite_lower", "random_mindeg"])
    g.add_argument("--s", type=_positive, default=1)
    g.add_argument("--m", type=_positive, default=3)
    g.add_argument("--n", type=_positive)
    g.add_argument("--min-degree", type=_nonneg)
    g.add_argument("--part", type=_positive)
    g.add_argument("--ends", default="H1,H1")
    g.add_argument("--seed", type=_nonneg, default=0)
    g.add_argument("--format", choices=["edge-list", "json", "dot"], default="edge-list")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="find a spanning tree with at most s branch vertices")
    s.add_argument("input")
    s.add_argument("--s", type=_nonneg, required=True)
    s.add_argument("--mode", choices=["heuristic", "exact"], default="heuristic")
    s.add_argument("--seed", type=_nonneg, default=0)
    s.add_argument("--no-fallback", action="store_true", help="disable the whole-graph and exact fallbacks")
    s.add_argument("--explain", action="store_true")
    s.add_argument("--input-format", choices=gio.FORMATS)
    s.add_argument("--format", choices=["text", "json", "dot"], default="text")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    pa = sub.add_parser("partition", help="robust partition into JSON lines")
    pa.add_argument("input")
    pa.add_argument("--r", type=int, required=True)
    pa.add_argument("--gamma", type=_fraction, required=True)
    pa.add_argument("--mode", choices=["exact", "heuristic"], default="exact")
    pa.add_argument("--schedule", choices=["desk", "default"], default="desk")
    pa.add_argument("--seed", type=_nonneg, default=0)
    pa.add_argument("--input-format", choices=gio.FORMATS)
    pa.add_argument("--out")
    pa.set_defaults(func=cmd_partition)

    v = sub.add_parser("verify", help="check a tree against its graph")
    v.add_argument("graph")
    v.add_argument("tree")
    v.add_argument("--s", type=_nonneg)
    v.add_argument("--input-format", choices=gio.FORMATS)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("experiment", help="run an experiment")
    esub = e.add_subparsers(dest="experiment", required=True)
    c = esub.add_parser("conjecture")
    c.add_argument("--n-max", type=_positive, required=True)
    c.add_argument("--s", type=_positive, required=True)
    c.add_argument("--sample", choices=["exhaustive", "random"], default="exhaustive")
    c.add_argument("--count", type=_positive, default=2000)
    c.add_argument("--seed", type=_nonneg, default=0)
    c.add_argument("--format", choices=["text", "json"], default="text")
    c.add_argument("--out")
    c.set_defaults(func=cmd_conjecture)
    b = esub.add_parser("star-matching-bound")
    b.add_argument("--s", type=_positive, required=True)
    b.add_argument("--n", type=_positive, required=True)
    b.add_argument("--samples", type=_positive, default=200)
    b.add_argument("--seed", type=_nonneg, default=0)
    b.add_argument("--format", choices=["text", "json"], default="text")
    b.add_argument("--out")
    b.set_defaults(func=cmd_star_bound)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParameterError, GraphError, gio.GraphFormatError, OracleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
