"""Command line front end.

Exit codes: 0 success, 1 usage or input error, 2 contract violation
detected at run time (for example a declared maximum degree proven wrong).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from .assign import assign_edges, forest_decomposition
from .bench import (OPERATIONS, render_sweep_figure, render_trial_figure,
                    reports_csv, run_sweep, run_trials, fit_power_law,
                    fitted_envelope_constant)
from .exact import (BRUTE_FORCE_LIMIT, brute_force_arboricity_small,
                    distance_to_arboricity, exact_arboricity)
from .generators import (DESK_SCALE_M, DESK_SCALE_N, FAMILIES, InstanceDescriptor,
                         certify, gen_instance)
from .graph import GraphFormatError, QuerySession, read_graph_file, write_graph_file
from .ratio import as_fraction
from .samplers import EdgeCountError, sample_edge_almost_uniform
from .tester import DegreeContractError, TesterConfig

VARIANT_FLAGS = {"known-m": "known_m", "known-d": "known_max_degree",
                 "bdm": "bounded_degree_model"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _ratio(text):
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a ratio: {text!r}") from exc


def _add_common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", type=Path, default=None, help="write CSV here")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--threads", type=int, default=1, help="worker processes for trials")


def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {k: _jsonable(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set)):
        return [_jsonable(v) for v in obj]
    return obj


def _check_desk_scale(graph):
    if graph.n > DESK_SCALE_N or graph.m > DESK_SCALE_M:
        raise SystemExit(
            f"error: exact oracles are capped at n <= {DESK_SCALE_N}, "
            f"m <= {DESK_SCALE_M}; got n={graph.n}, m={graph.m}"
        )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="arbotest",
                     description="Tolerant bounded-arboricity testing toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[], help="generate an instance file")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=int, default=1)
    p.add_argument("--m-bar", type=int, default=None)
    p.add_argument("--eps", type=_ratio, default=None)
    p.add_argument("--clique", type=int, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--certify", action="store_true",
                   help="attach exact labels (desk scale only)")
    _add_common(p)

    p = sub.add_parser("oracle", help="exact arboricity / distance computations")
    p.add_argument("--graph", type=Path, required=True)
    p.add_argument("--alpha", type=int, default=1)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--distance", action="store_true")
    mode.add_argument("--arboricity", action="store_true")
    mode.add_argument("--bruteforce", action="store_true")
    _add_common(p)

    p = sub.add_parser("assign", help="run the deterministic edge assignment")
    p.add_argument("--graph", type=Path, required=True)
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--eps", type=_ratio, required=True)
    p.add_argument("--gamma", type=_ratio, default=Fraction(0))
    p.add_argument("--decompose", action="store_true")
    _add_common(p)

    p = sub.add_parser("isactive", help="sample the local activity test")
    p.add_argument("--graph", type=Path, required=True)
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--gamma", type=_ratio, required=True)
    p.add_argument("--delta", type=_ratio, required=True)
    p.add_argument("--vertex", type=int, required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    _add_common(p)

    p = sub.add_parser("sample-edge", help="draw near-uniform edges")
    p.add_argument("--graph", type=Path, required=True)
    p.add_argument("--eps", type=_ratio, required=True)
    p.add_argument("--delta", type=_ratio, required=True)
    p.add_argument("--draws", type=int, default=1000)
    p.add_argument("--m-hint", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("estimate-m", help="sublinear edge-count estimates")
    p.add_argument("--graph", type=Path, required=True)
    p.add_argument("--delta", type=_ratio, required=True)
    p.add_argument("--trials", type=int, default=10)
    _add_common(p)

    p = sub.add_parser("test", help="run the tolerant arboricity tester")
    p.add_argument("--graph", type=Path, required=True)
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--eps", type=_ratio, required=True)
    p.add_argument("--variant", choices=sorted(VARIANT_FLAGS), default=None)
    p.add_argument("--m", type=int, default=None, help="exact m for known-m")
    p.add_argument("--d", type=int, default=None, help="max degree for known-d/bdm")
    p.add_argument("--trials", type=int, default=1)
    _add_common(p)

    p = sub.add_parser("bench", help="trial batches and scaling sweeps")
    p.add_argument("--graph", type=Path, default=None)
    p.add_argument("--op", choices=OPERATIONS, default="test")
    p.add_argument("--alpha", type=int, default=1)
    p.add_argument("--eps", type=_ratio, default=Fraction(1, 20))
    p.add_argument("--gamma", type=_ratio, default=Fraction(1, 4))
    p.add_argument("--delta", type=_ratio, default=Fraction(1, 10))
    p.add_argument("--vertex", type=int, default=0)
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--m-hint", type=int, default=None)
    p.add_argument("--variant", choices=sorted(VARIANT_FLAGS), default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--sweep", action="store_true",
                   help="matching-bipartite scaling sweep instead of one graph")
    p.add_argument("--sizes", type=str, default="1024,2048,4096,8192",
                   help="comma-separated n values for --sweep")
    p.add_argument("--figure", type=Path, default=None,
                   help="figure path (default: next to --csv)")
    p.add_argument("--no-figure", action="store_true")
    _add_common(p)

    return parser


def _make_config(args) -> TesterConfig:
    variant = VARIANT_FLAGS.get(args.variant, "standard") if args.variant else "standard"
    return TesterConfig(alpha=args.alpha, eps=args.eps, variant=variant,
                        known_m=args.m, max_degree=args.d)


def _cmd_gen(args) -> int:
    desc = InstanceDescriptor(family=args.family, n=args.n, seed=args.seed,
                              alpha=args.alpha, m_bar=args.m_bar, eps=args.eps,
                              clique=args.clique, p=args.p,
                              max_degree=args.max_degree)
    graph = gen_instance(desc)
    write_graph_file(graph, args.out)
    info = {"family": args.family, "n": graph.n, "m": graph.m, "path": str(args.out)}
    if args.certify:
        _check_desk_scale(graph)
        info["labels"] = _jsonable(certify(graph, args.alpha))
    print(json.dumps(info) if args.json else
          f"wrote {args.out}: n={graph.n} m={graph.m}" +
          (f" labels={info.get('labels')}" if args.certify else ""))
    return 0


def _cmd_oracle(args) -> int:
    graph = read_graph_file(args.graph)
    _check_desk_scale(graph)
    out = {"n": graph.n, "m": graph.m, "alpha": args.alpha}
    if args.bruteforce:
        if graph.n > BRUTE_FORCE_LIMIT:
            raise SystemExit(f"error: brute force needs n <= {BRUTE_FORCE_LIMIT}")
        out["bruteforce_arboricity"] = brute_force_arboricity_small(graph)
    elif args.distance:
        out["distance"] = _jsonable(distance_to_arboricity(graph, args.alpha))
    else:
        out["arboricity"] = exact_arboricity(graph)
    print(json.dumps(out) if args.json else out)
    return 0


def _cmd_assign(args) -> int:
    graph = read_graph_file(args.graph)
    trace = assign_edges(graph, args.alpha, args.eps, args.gamma)
    summary = {
        "n": graph.n, "m": graph.m, "alpha": args.alpha,
        "eps": str(args.eps), "gamma": str(args.gamma), "ell": trace.ell,
        "remaining_edges": trace.remaining_edges,
        "batch_sizes": [len(b) for b in trace.B],
        "active_after": len(trace.A[-1]),
        "max_assigned": max(trace.a, default=0),
    }
    if args.decompose:
        dec = forest_decomposition(graph, trace, args.alpha)
        summary["removed_edges"] = len(dec.removed_edges)
        summary["kept_edges"] = len(dec.oriented_edges)
        summary["forest_labels"] = max(dec.forest_label.values(), default=0)
    if args.json:
        print(json.dumps(summary))
    else:
        for key, value in summary.items():
            print(f"{key}: {value}")
    return 0


def _cmd_isactive(args) -> int:
    graph = read_graph_file(args.graph)
    reports = run_trials(graph, "isactive",
                         {"alpha": args.alpha, "gamma": args.gamma,
                          "delta": args.delta, "vertex": args.vertex,
                          "level": args.level},
                         args.trials, args.seed, workers=args.threads)
    yes = sum(1 for r in reports if r.verdict == "YES")
    mean_q = sum(r.total_queries for r in reports) / len(reports)
    out = {"vertex": args.vertex, "level": args.level, "trials": args.trials,
           "yes_frequency": yes / args.trials, "mean_queries": mean_q}
    _emit_reports(args, reports, out)
    return 0


def _cmd_sample_edge(args) -> int:
    graph = read_graph_file(args.graph)
    rng = random.Random(args.seed)
    session = QuerySession(graph)
    m_hint = args.m_hint or graph.m
    if m_hint < 1:
        raise SystemExit("error: the graph has no edges to sample")
    freq = {}
    failures = 0
    for _ in range(args.draws):
        edge = sample_edge_almost_uniform(session, rng, graph.n, args.eps,
                                          args.delta, m_hint)
        if edge is None:
            failures += 1
            continue
        u, v = edge
        key = (u, v) if u < v else (v, u)
        freq[key] = freq.get(key, 0) + 1
    out = {"draws": args.draws, "failures": failures,
           "distinct_edges": len(freq),
           "queries": session.total_queries}
    if args.json:
        out["frequencies"] = {f"{u}-{v}": c for (u, v), c in sorted(freq.items())}
        print(json.dumps(out))
    else:
        print(out)
        for (u, v), count in sorted(freq.items()):
            print(f"{u} {v} {count}")
    return 0


def _cmd_estimate_m(args) -> int:
    graph = read_graph_file(args.graph)
    reports = run_trials(graph, "estimate-m", {"delta": args.delta},
                         args.trials, args.seed, workers=args.threads)
    in_range = sum(1 for r in reports if r.verdict == "OK")
    out = {"true_m": graph.m, "trials": args.trials,
           "bracketing_rate": in_range / args.trials,
           "estimates": [r.m_bar for r in reports]}
    _emit_reports(args, reports, out)
    return 0


def _cmd_test(args) -> int:
    graph = read_graph_file(args.graph)
    config = _make_config(args)
    reports = run_trials(graph, "test", {"config": config}, args.trials,
                         args.seed, workers=args.threads)
    yes = sum(1 for r in reports if r.verdict == "YES")
    out = {"trials": args.trials, "yes": yes, "no": args.trials - yes,
           "mean_queries": sum(r.total_queries for r in reports) / len(reports)}
    _emit_reports(args, reports, out)
    return 0


def _emit_reports(args, reports, summary) -> None:
    if args.csv:
        args.csv.write_text(reports_csv(reports))
    print(json.dumps(summary) if args.json else summary)


def _cmd_bench(args) -> int:
    figure = args.figure
    if figure is None and args.csv is not None and not args.no_figure:
        figure = args.csv.with_suffix(".png")
    if args.sweep:
        sizes = [int(tok) for tok in args.sizes.split(",") if tok]
        points = run_sweep(sizes, args.alpha, args.eps, args.trials, args.seed,
                           variant=VARIANT_FLAGS.get(args.variant, "standard")
                           if args.variant else "standard",
                           workers=args.threads)
        slope, _ = fit_power_law(points)
        c = fitted_envelope_constant(points)
        summary = {"sizes": sizes, "slope": round(slope, 3),
                   "envelope_constant": round(c, 3),
                   "mean_queries": [round(p.mean_queries, 1) for p in points]}
        if args.csv:
            rows = ["n,m,trials,mean_queries,mean_degree_queries,mean_neighbor_queries"]
            rows += [f"{p.n},{p.m},{p.trials},{p.mean_queries},"
                     f"{p.mean_degree_queries},{p.mean_neighbor_queries}"
                     for p in points]
            args.csv.write_text("\n".join(rows) + "\n")
        if figure is not None:
            render_sweep_figure(points, figure)
        print(json.dumps(summary) if args.json else summary)
        return 0

    if args.graph is None:
        raise SystemExit("error: bench needs --graph unless --sweep is given")
    graph = read_graph_file(args.graph)
    if args.op == "test":
        params = {"config": _make_config(args)}
    elif args.op == "isactive":
        params = {"alpha": args.alpha, "gamma": args.gamma, "delta": args.delta,
                  "vertex": args.vertex, "level": args.level}
    elif args.op == "estimate-m":
        params = {"delta": args.delta}
    else:
        params = {"eps_s": args.eps, "delta": args.delta, "m_hint": args.m_hint}
    reports = run_trials(graph, args.op, params, args.trials, args.seed,
                         workers=args.threads)
    if args.csv:
        args.csv.write_text(reports_csv(reports))
    if figure is not None:
        render_trial_figure(reports, figure)
    summary = {"op": args.op, "trials": args.trials,
               "mean_queries": sum(r.total_queries for r in reports) / len(reports)}
    print(json.dumps(summary) if args.json else summary)
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "oracle": _cmd_oracle,
    "assign": _cmd_assign,
    "isactive": _cmd_isactive,
    "sample-edge": _cmd_sample_edge,
    "estimate-m": _cmd_estimate_m,
    "test": _cmd_test,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return _COMMANDS[args.command](args)
    except DegreeContractError as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return 2
    except (GraphFormatError, EdgeCountError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 1
        return exc.code if exc.code is not None else 0


if __name__ == "__main__":
    sys.exit(main())
