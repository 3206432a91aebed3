from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from dsoracle import settings
from dsoracle.config import ORACLE_KINDS, OracleConfig, VerifyConfig
from dsoracle.errors import InvariantViolation, OracleError
from dsoracle.io.container import load_container, save_container
from dsoracle.io.formats import FORMATS, read_graph, write_graph
from dsoracle.oracles import ApaspOracle, build_oracle, oracle_kind
from dsoracle.oracles.exact import format_distance
from dsoracle.utils.bench import (
    BenchCase,
    doubling_suite,
    format_csv,
    load_suite,
    plot_stretch_histogram,
    run_suite,
    write_histogram_csv,
)
from dsoracle.utils.generate import GRAPH_KINDS, generate_graph
from dsoracle.utils.verify import verify_oracle, write_report_csv

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2


def _parse_args(argv: list[str]) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Distance sensitivity oracles: build, query, verify, benchmark")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="Build an oracle and save it as a JSON container")
    _add_graph_flags(p_build, required=True)
    _add_oracle_flags(p_build)
    p_build.add_argument("--out", type=Path, required=True, help="Container file to write")

    p_query = sub.add_parser("query", help="Answer one query from a saved container")
    p_query.add_argument("container", type=Path)
    p_query.add_argument("--u", type=int, default=None, help="First endpoint (apasp only; single-source uses the root)")
    p_query.add_argument("--v", type=int, required=True, help="Target vertex")
    p_query.add_argument("--x", type=int, required=True, help="Failed vertex")
    p_query.add_argument("--no-path", action="store_true", help="Print the distance only")

    p_verify = sub.add_parser("verify", help="Check a container against exact replacement distances")
    p_verify.add_argument("container", type=Path)
    _add_graph_flags(p_verify, required=False)
    p_verify.add_argument("--csv", type=Path, default=None, help="Write the per-query stretch table")
    p_verify.add_argument("--plot", type=Path, default=None, help="Write a stretch histogram PNG")
    p_verify.add_argument("--workers", type=int, default=None, help="Threads for the exact baseline")

    p_bench = sub.add_parser("bench", help="Build and verify oracles over a suite of generated graphs")
    _add_oracle_flags(p_bench)
    p_bench.add_argument("--family", choices=GRAPH_KINDS, default="gnp")
    p_bench.add_argument("--sizes", type=str, default="64,128,256", help="Comma-separated vertex counts ('' for none)")
    p_bench.add_argument("--double", type=int, nargs=2, metavar=("START", "STOP"), default=None,
                         help="Doubling sizes from START up to STOP (overrides --sizes)")
    p_bench.add_argument("--degree", type=float, default=10.0, help="Expected degree for gnp graphs")
    p_bench.add_argument("--suite", type=Path, default=None, help="JSON suite file (overrides size flags)")
    p_bench.add_argument("--csv", type=Path, default=None, help="Write rows here instead of stdout")
    p_bench.add_argument("--histogram", type=Path, default=None, help="Per-query stretch CSV")
    p_bench.add_argument("--plot", type=Path, default=None, help="Stretch histogram PNG")

    p_gen = sub.add_parser("gen", help="Generate a seeded test graph")
    p_gen.add_argument("kind", choices=GRAPH_KINDS)
    p_gen.add_argument("--n", type=int, default=50)
    p_gen.add_argument("--p", type=float, default=0.2, help="Edge probability (gnp)")
    p_gen.add_argument("--rows", type=int, default=2)
    p_gen.add_argument("--cols", type=int, default=20)
    p_gen.add_argument("--weighted", action="store_true", help="Integer weights 1..max-weight (gnp)")
    p_gen.add_argument("--max-weight", type=int, default=10)
    p_gen.add_argument("--seed", type=int, default=None)
    p_gen.add_argument("--format", choices=FORMATS, default="edgelist")
    p_gen.add_argument("--out", type=Path, required=True)

    p_config = sub.add_parser("config", help="View or edit default settings")
    p_config.add_argument("--show", action="store_true", help="Show current configuration")
    p_config.add_argument("--set-seed", type=int, metavar="SEED")
    p_config.add_argument("--set-epsilon", type=float, metavar="EPS")
    p_config.add_argument("--set-k", type=int, metavar="K")

    return parser.parse_args(argv)


def _add_graph_flags(parser: argparse.ArgumentParser, required: bool):
    parser.add_argument("--graph", type=Path, required=required, help="DIMACS .gr or edge-list file")
    parser.add_argument("--format", choices=FORMATS, default=None, help="Default: by file suffix")


def _add_oracle_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--oracle", choices=ORACLE_KINDS, default="sssp3")
    parser.add_argument("--source", type=int, default=None, help="Root vertex (default: from config)")
    parser.add_argument("--epsilon", type=float, default=None, help="Accuracy (default: from config)")
    parser.add_argument("--k", type=int, default=None, help="apasp hierarchy depth (default: from config)")
    parser.add_argument("--seed", type=int, default=None, help="apasp sampling seed (default: from config)")


def _build_oracle_cfg(args: argparse.Namespace) -> OracleConfig:
    cfg = OracleConfig(
        kind=args.oracle,
        source=settings.get_source() if args.source is None else args.source,
        epsilon=settings.get_epsilon() if args.epsilon is None else args.epsilon,
        k=settings.get_k() if args.k is None else args.k,
        seed=settings.get_seed() if args.seed is None else args.seed,
    )
    cfg.validate()
    return cfg


def _build_verify_cfg(workers: int | None = None) -> VerifyConfig:
    cfg = VerifyConfig.from_file()
    cfg.apasp_full_cutoff = settings.get_apasp_full_cutoff()
    cfg.apasp_sampled_failures = settings.get_apasp_sampled_failures()
    cfg.seed = settings.get_seed()
    if workers is not None:
        cfg.workers = workers
    return cfg


def _parse_sizes(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"--sizes must be comma-separated integers, got {text!r}") from None


def cmd_build(args: argparse.Namespace) -> int:
    cfg = _build_oracle_cfg(args)
    g = read_graph(args.graph, args.format)
    oracle = build_oracle(g, cfg)
    save_container(oracle, args.out)
    print(f"built {cfg.kind} on n={g.n} m={g.m}: {oracle.entries} entries -> {args.out}")
    return EXIT_OK


def format_answer(ans, with_path: bool = True) -> str:
    if not ans.reachable:
        return "dist=inf"
    line = f"dist={format_distance(ans.distance)}"
    if with_path and ans.path is not None:
        line += " path=" + ",".join(map(str, ans.path.vertices))
    return line


def cmd_query(args: argparse.Namespace) -> int:
    oracle = load_container(args.container)
    if isinstance(oracle, ApaspOracle):
        if args.u is None:
            print("error: apasp queries need both --u and --v", file=sys.stderr)
            return EXIT_USAGE
        ans = oracle.query(args.u, args.v, args.x, with_path=not args.no_path)
    else:
        if args.u is not None and args.u != oracle.root:
            print(f"error: {oracle_kind(oracle)} answers from its root {oracle.root} only", file=sys.stderr)
            return EXIT_USAGE
        ans = oracle.query(args.v, args.x)
    print(format_answer(ans, with_path=not args.no_path))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    graph = read_graph(args.graph, args.format) if args.graph is not None else None
    oracle = load_container(args.container, graph)
    report = verify_oracle(oracle, _build_verify_cfg(args.workers))
    print(report.summary())
    for line in report.violations[:10]:
        print(f"  {line}")
    if args.csv is not None:
        write_report_csv(report, args.csv)
        print(f"Saved per-query table to {args.csv}")
    if args.plot is not None:
        plot_stretch_histogram([report], args.plot)
        print(f"Saved histogram to {args.plot}")
    return EXIT_OK if report.ok else EXIT_VERIFY_FAILED


def cmd_bench(args: argparse.Namespace) -> int:
    cfg = _build_oracle_cfg(args)
    if args.suite is not None:
        cases = load_suite(args.suite)
    elif args.double is not None:
        cases = doubling_suite(args.double[0], args.double[1], cfg, args.family, args.degree, cfg.seed)
    else:
        cases = [BenchCase(n, cfg, args.family, args.degree, cfg.seed) for n in _parse_sizes(args.sizes)]
    reports = run_suite(cases, _build_verify_cfg())
    text = format_csv(reports)
    if args.csv is not None:
        args.csv.write_text(text)
        print(f"Saved {len(reports)} rows to {args.csv}")
    else:
        print(text, end="")
    if args.histogram is not None:
        write_histogram_csv(reports, args.histogram)
    if args.plot is not None and reports:
        plot_stretch_histogram(reports, args.plot)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_VERIFY_FAILED


def cmd_gen(args: argparse.Namespace) -> int:
    seed = settings.get_seed() if args.seed is None else args.seed
    if args.kind == "gnp":
        params = {"n": args.n, "p": args.p, "weighted": args.weighted, "max_weight": args.max_weight}
    elif args.kind == "grid":
        params = {"rows": args.rows, "cols": args.cols}
    else:
        params = {"n": args.n}
    g = generate_graph(args.kind, seed, **params)
    write_graph(g, args.out, args.format)
    print(f"wrote {args.kind} graph n={g.n} m={g.m} to {args.out}")
    return EXIT_OK


def cmd_config(args: argparse.Namespace) -> int:
    """Show or edit configuration."""
    config_file = settings.get_config_file_path()
    changed = False

    for value, setter, name in (
        (args.set_seed, settings.set_seed, "seed"),
        (args.set_epsilon, settings.set_epsilon, "epsilon"),
        (args.set_k, settings.set_k, "k"),
    ):
        if value is None:
            continue
        if not setter(value):
            print(f"✗ Failed to save {name} to {config_file}", file=sys.stderr)
            return EXIT_USAGE
        print(f"✓ {name} set to {value}")
        changed = True

    if args.show or not changed:
        config_settings = settings.load_settings()
        print()
        print("=" * 60)
        print(f"dsoracle configuration ({config_file})")
        print("=" * 60)
        for key, value in config_settings.items():
            print(f"  {key:24s}: {value}")
        print("=" * 60)
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "query": cmd_query,
    "verify": cmd_verify,
    "bench": cmd_bench,
    "gen": cmd_gen,
    "config": cmd_config,
}


def main(argv: list[str] | None = None) -> int:
    args = _parse_args(sys.argv[1:] if argv is None else argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(level)

    command = COMMANDS.get(args.command)
    if command is None:
        raise SystemExit(f"Unknown command {args.command}")
    try:
        return command(args)
    except (OracleError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as e:
        print(f"error: invariant violated: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
