"""Command-line front end.  Spec strings use the ``n:k:i1,...,ik`` format.

JSON is the machine format everywhere; tables are derived views.  Scan output
written with ``--out`` includes the JSON report, a CSV, and rendered figures.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .circulant import (
    InvalidSpecError,
    build_graph,
    format_spec,
    graph_to_dot,
    graph_to_json,
    normalize,
    parse_spec,
    parse_vertex,
)
from .families import classify_detailed, mr_lower_bound, predict_z
from .forcing import closure, is_forcing_set
from .isomorphism import conjecture_scan, verify_cubic_uniqueness
from .linalg import parse_matrix_file, rank, rank_invariance_check, to_matrix
from .solver import (
    Budget,
    BudgetExceededError,
    DisconnectedGraphError,
    bounds_report,
    solve_exact,
)


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("ZF_THREADS", "1")))
    except ValueError:
        return 1


def _budget_from(args: argparse.Namespace) -> Budget:
    return Budget(
        max_nodes=getattr(args, "budget_nodes", None),
        max_seconds=getattr(args, "budget_secs", None),
    )


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_graph(args: argparse.Namespace) -> int:
    spec = parse_spec(args.spec)
    graph = build_graph(spec)
    if args.format == "dot":
        _emit(graph_to_dot(graph), args.out)
    else:
        _emit(graph_to_json(graph, spec), args.out)
    return 0


def _cmd_closure(args: argparse.Namespace) -> int:
    spec = parse_spec(args.spec)
    graph = build_graph(spec)
    black = [parse_vertex(tok, spec.n) for tok in args.black.split(",") if tok.strip()]
    trace = closure(graph, black)
    lines = []
    for step, (forcer, forced) in enumerate(trace.steps):
        lines.append(json.dumps({
            "step": step,
            "forcer": graph.vertex_name(forcer),
            "forced": graph.vertex_name(forced),
        }, sort_keys=True))
    lines.append(json.dumps({
        "final": [graph.vertex_name(v) for v in trace.final_vertices],
        "forcing_set": trace.final == graph.full_mask,
        "initial": sorted(graph.vertex_name(v) for v in black),
    }, sort_keys=True))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_solve(args: argparse.Namespace) -> int:
    spec = parse_spec(args.spec)
    result = solve_exact(
        spec,
        budget=_budget_from(args),
        threads=args.threads,
        allow_disconnected=args.allow_disconnected,
    )
    doc = {
        "spec": format_spec(normalize(spec)),
        "z": result.z,
        "witness": list(result.witness),
        "bounds": result.bounds.to_json_dict() if result.bounds else None,
        "nodes": result.nodes_explored,
        "time": round(result.wall_time, 6),
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _cmd_bounds(args: argparse.Namespace) -> int:
    spec = parse_spec(args.spec)
    report = bounds_report(spec, orbit_search=args.orbit_search)
    doc = {"spec": format_spec(normalize(spec)), **report.to_json_dict()}
    if args.format == "table":
        lines = [f"{key}: {value}" for key, value in doc.items() if key != "notes"]
        lines += [f"note: {n}" for n in doc["notes"]]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    spec = parse_spec(args.spec)
    doc = classify_detailed(spec)
    doc["predicted_z"] = predict_z(spec)
    if args.solve:
        result = solve_exact(spec, budget=_budget_from(args))
        doc["solver_z"] = result.z
        doc["agreement"] = (
            None if doc["predicted_z"] is None else doc["predicted_z"] == result.z
        )
    else:
        doc["solver_z"] = None
        doc["agreement"] = None
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _cmd_rank(args: argparse.Namespace) -> int:
    if (args.spec is None) == (args.matrix_file is None):
        raise InvalidSpecError("rank needs exactly one of SPEC or --matrix-file")
    if args.spec:
        spec = parse_spec(args.spec)
        matrix = to_matrix(spec)
        label = format_spec(spec)
    else:
        matrix = parse_matrix_file(args.matrix_file)
        label = args.matrix_file
    doc = {"source": label, "rows": matrix.rows, "cols": matrix.cols, "rank": rank(matrix)}
    if args.check_invariance:
        doc["permutation_invariant"] = rank_invariance_check(matrix, args.check_invariance)
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _cmd_scan(args: argparse.Namespace) -> int:
    from .scanner import run_scan

    report = run_scan(
        n_min=args.n_min,
        n_max=args.n_max,
        k_values=args.k,
        threads=args.threads,
        budget=_budget_from(args),
    )
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "report.json").write_text(report.to_json())
        (outdir / "report.csv").write_text(report.to_csv())
        from .plots import render_scan_figures

        figures = render_scan_figures(report, outdir)
        sys.stdout.write(report.to_table())
        sys.stdout.write(
            "wrote " + ", ".join(str(p) for p in [outdir / "report.json", outdir / "report.csv", *figures]) + "\n"
        )
    elif args.format == "table":
        sys.stdout.write(report.to_table())
    else:
        sys.stdout.write(report.to_json())
    return 0


def _cmd_conjecture(args: argparse.Namespace) -> int:
    findings = conjecture_scan(args.n_max, args.k)
    lines = [json.dumps(f.to_json_dict(), sort_keys=True) for f in findings]
    if args.out:
        Path(args.out).write_text("\n".join(lines) + ("\n" if lines else ""))
    else:
        for line in lines:
            sys.stdout.write(line + "\n")
    counter = sum(1 for f in findings if f.status == "counterexample")
    sys.stdout.write(
        f"pairs tested: {len(findings)}  counterexamples: {counter}  "
        f"(k={args.k}, n <= {args.n_max})\n"
    )
    return 0


def _cmd_uniqueness(args: argparse.Namespace) -> int:
    report = verify_cubic_uniqueness(args.n_half, budget=_budget_from(args))
    doc = {
        "n_half": report.n_half,
        "classes": report.class_count,
        "z_values": list(report.z_values),
        "minimal_count": report.minimal_count,
        "minimal_matches_reference": report.minimal_matches_reference,
        "reference": report.reference_spec,
        "ok": report.ok,
    }
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zf",
        description="Forcing numbers, bounds, and structure of bipartite circulant graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, budget: bool = True) -> None:
        p.add_argument("--out", help="write output to this path instead of stdout")
        if budget:
            p.add_argument("--budget-nodes", type=int, default=None, help="search node limit")
            p.add_argument("--budget-secs", type=float, default=None, help="search time limit")

    p = sub.add_parser("graph", help="export a spec's graph")
    p.add_argument("spec")
    p.add_argument("--format", choices=["dot", "json"], default="json")
    add_common(p, budget=False)
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("closure", help="run the forcing rule from a black set")
    p.add_argument("spec")
    p.add_argument("--black", required=True, help="comma list of vertices, e.g. L0,L1,R0")
    add_common(p, budget=False)
    p.set_defaults(func=_cmd_closure)

    p = sub.add_parser("solve", help="exact forcing number")
    p.add_argument("spec")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--allow-disconnected", action="store_true")
    add_common(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("bounds", help="all applicable bounds for a spec")
    p.add_argument("spec")
    p.add_argument("--orbit-search", action="store_true",
                   help="minimize the span bound over the affine orbit")
    p.add_argument("--format", choices=["json", "table"], default="json")
    add_common(p, budget=False)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("classify", help="family memberships of a spec")
    p.add_argument("spec")
    p.add_argument("--solve", action="store_true", help="also solve exactly and compare")
    add_common(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("rank", help="exact rank of a circulant or matrix file")
    p.add_argument("spec", nargs="?")
    p.add_argument("--matrix-file", help="text matrix, one row per line")
    p.add_argument("--check-invariance", type=int, metavar="TRIALS", default=0,
                   help="also verify rank under random permutations")
    add_common(p, budget=False)
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("scan", help="solve every canonical instance in a range")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--k", type=int, nargs="+", required=True)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.add_argument("--out", help="directory for report.json, report.csv, and figures")
    p.add_argument("--budget-nodes", type=int, default=None)
    p.add_argument("--budget-secs", type=float, default=None)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("conjecture", help="scan for non-affine isomorphic representations")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", help="write findings as JSON lines to this path")
    p.set_defaults(func=_cmd_conjecture)

    p = sub.add_parser("uniqueness", help="check minimal cubic bipartite classes")
    p.add_argument("--n-half", type=int, required=True)
    p.add_argument("--budget-nodes", type=int, default=None)
    p.add_argument("--budget-secs", type=float, default=None)
    p.set_defaults(func=_cmd_uniqueness)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        payload = {"error": str(exc), "nodes": exc.nodes}
        if exc.bounds is not None:
            payload["bounds"] = exc.bounds.to_json_dict()
        sys.stderr.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return 1
    except (InvalidSpecError, DisconnectedGraphError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
