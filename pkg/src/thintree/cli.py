"""Command-line driver: ``thintree {thin,cluster,verify,gen}``.

Exit codes: 0 success, 1 usage, 2 unreadable input, 3 oracle failure,
4 iteration cap.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from .clustering import extract_all_clusters
from .formats import ParseError, digest, dump_report, export_dot, format_edge_list, load_graph
from .generators import barbell, gen_planted, random_weighted_graph
from .graph_core import GraphError, WeightedGraph
from .oracles import brute_force_optimum, exhaustive_suite, pinch_suite, random_suite
from .shift_engine import IterationCapExceeded, ThinConfig, run_thin
from .tree_position import EPS, caterpillar_position, lex_compare, random_position

log = logging.getLogger("thintree")

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_ORACLE, EXIT_CAP = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive_float(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def _positive_int(text):
    try:
        x = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if x < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return x


def _run_options(p):
    p.add_argument("--input", required=True, help="graph file")
    p.add_argument("--format", choices=["edgelist", "mtx"], help="default: by extension")
    p.add_argument("--init", choices=["caterpillar", "random"], default="caterpillar")
    p.add_argument("--order", help="comma-separated vertex labels for the caterpillar start")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=_positive_float, default=EPS)
    p.add_argument("--scan", choices=["first", "best"], default="first")
    p.add_argument("--max-iters", type=_positive_int, default=100_000)
    p.add_argument("--parallel", type=_positive_int, metavar="WORKERS",
                   help="scan candidate shifts with this many threads")
    p.add_argument("--dot-out", help="write the final tree as Graphviz DOT")
    p.add_argument("--json-out", help="write the report here instead of stdout")
    p.add_argument("--timing", action="store_true", help="add wall-clock seconds to the report")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="thintree", description="Thin tree positions and pinch clusters of weighted graphs.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    _run_options(sub.add_parser("thin", help="descend to a thin tree position"))
    _run_options(sub.add_parser("cluster", help="thin, then report local-minimum clusters"))

    v = sub.add_parser("verify", help="run the brute-force oracle suites")
    v.add_argument("--oracle-n", type=int, default=5, help="largest exhaustive leaf count (4..8)")
    v.add_argument("--oracle-seeds", type=_positive_int, default=3, help="random graphs per size")
    v.add_argument("--oracle-random", type=int, default=20, help="random instances at N <= 12")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--epsilon", type=_positive_float, default=EPS)

    g = sub.add_parser("gen", help="write a synthetic edge-list fixture")
    g.add_argument("--preset", choices=["barbell", "planted", "random"], default="planted")
    g.add_argument("--blocks", default="3,3", help="comma-separated block sizes")
    g.add_argument("--p-in", type=float, default=1.0)
    g.add_argument("--p-out", type=float, default=0.0)
    g.add_argument("--weight", type=_positive_float, default=1.0)
    g.add_argument("--chain", action="store_true", help="bridge consecutive blocks")
    g.add_argument("-n", type=int, default=8, help="vertex count for --preset random")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output", help="default: stdout")
    return parser


def _config(args) -> ThinConfig:
    return ThinConfig(epsilon=args.epsilon, scan_strategy=args.scan, init=args.init, seed=args.seed,
                      max_iterations=args.max_iters, parallel_scan=args.parallel is not None,
                      workers=args.parallel or 1)


def _start(g: WeightedGraph, args):
    if args.init == "random":
        return random_position(g, args.seed)
    if args.order is None:
        return caterpillar_position(g)
    ids = {g.label(v): v for v in range(g.vertex_count)}
    labels = [s.strip() for s in args.order.split(",")]
    unknown = [s for s in labels if s not in ids]
    if unknown:
        raise UsageError(f"--order names unknown vertices: {', '.join(unknown)}")
    if sorted(ids[s] for s in labels) != list(range(g.vertex_count)):
        raise UsageError("--order must list every vertex exactly once")
    return caterpillar_position(g, [ids[s] for s in labels])


def _emit(text: str, path):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_run(args, with_clusters: bool) -> int:
    if args.order is not None and args.init == "random":
        raise UsageError("--order only applies to --init caterpillar")
    try:
        data = Path(args.input).read_bytes()
        g = load_graph(args.input, args.format)
    except (ParseError, GraphError, OSError, UnicodeDecodeError) as exc:
        print(f"thintree: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if g.vertex_count < 2:
        print("thintree: need at least two vertices", file=sys.stderr)
        return EXIT_PARSE
    cfg = _config(args)
    t0 = time.perf_counter()
    try:
        res = run_thin(_start(g, args), cfg)
    except IterationCapExceeded as exc:
        print(f"thintree: {exc}", file=sys.stderr)
        return EXIT_CAP
    pos = res.position
    report = {
        "input": {"sha256": digest(data), "format": args.format or ("mtx" if args.input.endswith(".mtx") else "edgelist"),
                  "vertices": g.vertex_count, "edges": len(g.edges)},
        "config": {"init": cfg.init, "order": args.order, "seed": cfg.seed, "epsilon": cfg.epsilon,
                   "scan": cfg.scan_strategy, "max_iters": cfg.max_iterations,
                   "parallel": args.parallel},
        "trace": [s.as_dict() for s in res.trace],
        "final_profile": list(pos.profile().widths),
        "certification": {"thin": pos.certified, "iterations": res.iterations, "seed": cfg.seed},
    }
    if with_clusters:
        cr = extract_all_clusters(pos, cfg.epsilon)
        report["clusters"] = [
            {"edge_id": p.edge, "boundary": p.boundary,
             "side_a": [g.label(v) for v in sorted(p.cluster_a)],
             "side_b": [g.label(v) for v in sorted(p.cluster_b)]}
            for p in cr.pairs
        ]
        report["zero_width_edges"] = cr.zero_width_edges
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
    if args.dot_out:
        export_dot(pos, args.dot_out)
    _emit(dump_report(report), args.json_out)
    log.info("thin after %d shifts, profile head %s", res.iterations, report["final_profile"][:1])
    return EXIT_OK


def cmd_verify(args) -> int:
    if not 4 <= args.oracle_n <= 8:
        raise UsageError("--oracle-n must lie in 4..8")
    if args.oracle_random < 0:
        raise UsageError("--oracle-random must be nonnegative")
    eps = args.epsilon
    seeds = range(args.seed, args.seed + args.oracle_seeds)
    summaries = [exhaustive_suite(n, seeds, eps) for n in range(4, args.oracle_n + 1)]
    if args.oracle_random:
        summaries.append(random_suite(args.oracle_random, 12, args.seed, eps))
    summaries.append(pinch_suite(args.oracle_seeds * 5, min(args.oracle_n, 7), args.seed, eps))
    failed = False
    for s in summaries:
        print(s.line())
        for f in s.failures[:10]:
            print(f"  {f}")
        failed |= not s.ok
    # a thin position can never beat the exhaustive optimum
    n = min(args.oracle_n, 7)
    bad = 0
    for seed in seeds:
        g = random_weighted_graph(n, seed)
        best, _ = brute_force_optimum(g, eps)
        got = run_thin(caterpillar_position(g), ThinConfig(epsilon=eps)).position.profile().widths
        if lex_compare(got, best, eps) < 0:
            bad += 1
    print(f"{'PASS' if not bad else 'FAIL'} brute-force optimum bound n={n}: "
          f"{len(seeds)} graphs, {bad} failures")
    failed |= bad > 0
    return EXIT_ORACLE if failed else EXIT_OK


def cmd_gen(args) -> int:
    if args.preset == "barbell":
        g = barbell()
    elif args.preset == "random":
        if args.n < 2:
            raise UsageError("-n must be at least 2")
        g = random_weighted_graph(args.n, args.seed)
    else:
        try:
            blocks = [int(b) for b in args.blocks.split(",")]
            g = gen_planted(args.seed, blocks, args.p_in, args.p_out, args.weight, chain=args.chain)
        except ValueError as exc:
            raise UsageError(f"bad generator parameters: {exc}") from None
    if not g.edges:
        print("thintree: generated graph has no edges", file=sys.stderr)
        return EXIT_USAGE
    _emit(format_edge_list(g), args.output)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                            format="%(levelname)s %(name)s: %(message)s")
        if args.command in ("thin", "cluster"):
            return cmd_run(args, args.command == "cluster")
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_gen(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
