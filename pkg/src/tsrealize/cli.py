"""Command-line front end: instance generation, realization,
verification, LP export, brute-force oracles, and benchmark pipelines.

Exit codes: 0 success, 1 semantic failure (verification mismatch,
generation stall, oracle bound exceeded), 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .errors import ParseError, RealizationError
from .metric import (
    FiniteMetric,
    RealizationGraph,
    format_fraction,
    format_metric_file,
    parse_metric_file,
    verify_realization,
)
from .instances import (
    gen_double_tree_metric,
    gen_l1_points,
    gen_random_metric,
    gen_two_compatible_system,
    hanan_grid,
)
from .mip import build_subrealization_mip, write_lp
from .oracle import (
    DEFAULT_MAX_EDGES,
    DEFAULT_MAX_N,
    min_subrealization,
    skeleton_graph,
)
from .realizer import realize
from .splits import (
    format_points_file,
    format_splits_file,
    induced_metric,
    parse_points_file,
    parse_splits_file,
)

FAMILIES = ("l1", "doubletree", "splits2", "random")


def _sniff_instance(text: str) -> str:
    """Classify an instance file as metric, points, or splits."""
    lines = [
        s.strip()
        for s in text.splitlines()
        if s.strip() and not s.strip().startswith("#")
    ]
    if not lines:
        raise ParseError("empty instance file")
    first = lines[0].split()
    if len(first) == 2:
        return "points"
    if len(first) == 1:
        try:
            int(first[0])
        except ValueError:
            raise ParseError(f"unrecognized instance header {lines[0]!r}") from None
        if any(":" in line and "|" in line for line in lines[2:]):
            return "splits"
        return "metric"
    raise ParseError(f"unrecognized instance header {lines[0]!r}")


def load_metric(path: str) -> FiniteMetric:
    """Load a metric from a metric, points, or split-system file."""
    text = Path(path).read_text()
    kind = _sniff_instance(text)
    if kind == "points":
        return parse_points_file(text).metric()
    if kind == "splits":
        return induced_metric(parse_splits_file(text))
    return parse_metric_file(text)


def _instance_metric(family: str, n: int, seed: int) -> FiniteMetric:
    if family == "l1":
        return gen_l1_points(n, seed).metric()
    if family == "doubletree":
        return gen_double_tree_metric(n, seed)
    if family == "splits2":
        return induced_metric(gen_two_compatible_system(n, seed))
    return gen_random_metric(n, seed)


def cmd_gen(args) -> int:
    if args.family == "l1":
        pset = gen_l1_points(args.n, args.seed)
        payload = format_points_file(pset)
        summary = f"gen l1 n={args.n} seed={args.seed} points={len(pset)}"
    elif args.family == "splits2":
        system = gen_two_compatible_system(args.n, args.seed)
        payload = format_splits_file(system)
        summary = f"gen splits2 n={args.n} seed={args.seed} splits={len(system)}"
    elif args.family == "doubletree":
        metric = gen_double_tree_metric(args.n, args.seed)
        payload = format_metric_file(metric)
        summary = f"gen doubletree n={args.n} seed={args.seed}"
    else:
        metric = gen_random_metric(args.n, args.seed)
        payload = format_metric_file(metric)
        summary = f"gen random n={args.n} seed={args.seed}"
    Path(args.out).write_text(payload)
    print(f"{summary} -> {args.out}")
    return 0


def cmd_realize(args) -> int:
    metric = load_metric(args.input)
    graph = realize(metric)
    report = verify_realization(graph, metric)
    if not report.ok:
        print(f"internal error: output fails verification on {report.first_failure}", file=sys.stderr)
        return 1
    if args.out:
        payload = graph.to_dot() if args.format == "dot" else graph.to_json()
        Path(args.out).write_text(payload)
    print(
        f"realize n={metric.n} vertices={graph.n_vertices} "
        f"edges={len(graph.edges)} total={format_fraction(report.total_length)}"
    )
    return 0


def cmd_verify(args) -> int:
    metric = load_metric(args.metric)
    graph = RealizationGraph.from_json(Path(args.graph).read_text(), metric)
    report = verify_realization(graph, metric)
    if report.ok:
        print(f"pass total={format_fraction(report.total_length)}")
        return 0
    x, y, got, expected = report.first_failure
    print(
        f"fail pair=({x},{y}) graph={format_fraction(got) if got is not None else 'unreachable'} "
        f"expected={format_fraction(expected)}"
    )
    return 1


def cmd_export_mip(args) -> int:
    metric = load_metric(args.metric)
    graph = RealizationGraph.from_json(Path(args.graph).read_text(), metric)
    model = build_subrealization_mip(graph, metric, reduce=args.reduce)
    Path(args.out).write_text(write_lp(model))
    print(
        f"mip variables={len(model.variables)} constraints={len(model.constraints)} "
        f"-> {args.out}"
    )
    return 0


def cmd_oracle(args) -> int:
    if args.task == "vertices":
        metric = load_metric(args.input)
        skeleton = skeleton_graph(metric, args.max_oracle_n)
        if args.out:
            Path(args.out).write_text(skeleton.to_json())
        print(
            f"vertices={skeleton.n_vertices} skeleton_edges={len(skeleton.edges)} "
            f"skeleton_total={format_fraction(skeleton.total_length())}"
        )
        return 0
    if args.task == "subreal":
        metric = load_metric(args.metric)
        graph = RealizationGraph.from_json(Path(args.graph).read_text(), metric)
        edges, total = min_subrealization(graph, metric, args.max_oracle_edges)
        if args.out:
            Path(args.out).write_text(graph.edge_subgraph(edges).to_json())
        print(f"optimal_edges={len(edges)} optimal_total={format_fraction(total)}")
        return 0
    # mmn
    pset = parse_points_file(Path(args.input).read_text())
    grid = hanan_grid(pset)
    metric = pset.metric()
    edges, total = min_subrealization(grid, metric, args.max_oracle_edges)
    if args.out:
        Path(args.out).write_text(grid.edge_subgraph(edges).to_json())
    print(f"mmn_total={format_fraction(total)} network_edges={len(edges)}")
    return 0


def _bench_instance(task) -> dict:
    family, n, seed, with_oracle, max_n, max_edges = task
    metric = _instance_metric(family, n, seed)
    start = time.perf_counter()
    graph = realize(metric)
    elapsed = time.perf_counter() - start
    report = verify_realization(graph, metric)
    if not report.ok:
        raise RealizationError(
            f"bench instance {family} n={n} seed={seed} fails verification"
        )
    out = {
        "total": report.total_length,
        "time": elapsed,
        "r_sg": None,
        "r_ts": None,
    }
    if with_oracle:
        try:
            skeleton = skeleton_graph(metric, max_n)
            _, best = min_subrealization(skeleton, metric, max_edges)
            out["r_sg"] = report.total_length / best
            out["r_ts"] = report.total_length / skeleton.total_length()
        except RealizationError:
            pass  # beyond oracle bounds: ratios stay blank
    return out


def _mean(values) -> Fraction:
    return sum(values, Fraction(0)) / len(values)


def cmd_bench(args) -> int:
    ns = [int(tok) for tok in args.n.split(",")]
    workers = int(os.environ.get("TSREALIZE_THREADS", "1"))
    rows = []
    for n in ns:
        tasks = [
            (args.family, n, args.seed + i, args.with_oracle,
             args.max_oracle_n, args.max_oracle_edges)
            for i in range(args.count)
        ]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_bench_instance, tasks))
        else:
            results = [_bench_instance(t) for t in tasks]
        totals = [r["total"] for r in results]
        r_sg = [r["r_sg"] for r in results if r["r_sg"] is not None]
        r_ts = [r["r_ts"] for r in results if r["r_ts"] is not None]
        rows.append(
            {
                "family": args.family,
                "n": n,
                "count": args.count,
                "seed": args.seed,
                "mean_total": format_fraction(_mean(totals)),
                "oracle_count": len(r_sg),
                "mean_r_sg": f"{float(_mean(r_sg)):.6f}" if r_sg else "",
                "mean_r_ts": f"{float(_mean(r_ts)):.6f}" if r_ts else "",
            }
        )
        mean_time = sum(r["time"] for r in results) / len(results)
        print(
            f"# {args.family} n={n}: mean_time={mean_time:.3f}s "
            f"mean_total={rows[-1]['mean_total']} r_sg={rows[-1]['mean_r_sg'] or '-'}",
            file=sys.stderr,
        )
    header = "family,n,count,seed,mean_total,oracle_count,mean_r_sg,mean_r_ts"
    lines = [header] + [
        ",".join(str(row[key]) for key in header.split(",")) for row in rows
    ]
    csv_text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(csv_text)
    else:
        sys.stdout.write(csv_text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsrealize",
        description="Realizations of finite metrics in tight-span skeletons.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a benchmark instance file")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("realize", help="run the heuristic on an instance file")
    p.add_argument("input", help="metric, points, or splits file")
    p.add_argument("--out", help="write the realization graph here")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("verify", help="check a graph against a metric")
    p.add_argument("metric")
    p.add_argument("graph", help="graph JSON file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export-mip", help="write the subrealization MIP as LP text")
    p.add_argument("metric")
    p.add_argument("graph", help="graph JSON file")
    p.add_argument("--out", required=True)
    p.add_argument("--reduce", action="store_true",
                   help="flow variables only on shortest-path edges")
    p.set_defaults(func=cmd_export_mip)

    p = sub.add_parser("oracle", help="exponential-time exact baselines (small inputs)")
    oracle_sub = p.add_subparsers(dest="task", required=True)
    q = oracle_sub.add_parser("vertices", help="enumerate tight-span skeleton")
    q.add_argument("input", help="metric, points, or splits file")
    q.add_argument("--out")
    q.add_argument("--max-oracle-n", type=int, default=DEFAULT_MAX_N)
    q.set_defaults(func=cmd_oracle)
    q = oracle_sub.add_parser("subreal", help="minimal subrealization of a graph")
    q.add_argument("metric")
    q.add_argument("graph")
    q.add_argument("--out")
    q.add_argument("--max-oracle-edges", type=int, default=DEFAULT_MAX_EDGES)
    q.set_defaults(func=cmd_oracle)
    q = oracle_sub.add_parser("mmn", help="minimum Manhattan network length")
    q.add_argument("input", help="points file")
    q.add_argument("--out")
    q.add_argument("--max-oracle-edges", type=int, default=DEFAULT_MAX_EDGES)
    q.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="seeded benchmark sweep, CSV output")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--n", required=True, help="comma-separated sizes, e.g. 5,10")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--with-oracle", action="store_true")
    p.add_argument("--max-oracle-n", type=int, default=DEFAULT_MAX_N)
    p.add_argument("--max-oracle-edges", type=int, default=DEFAULT_MAX_EDGES)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RealizationError as exc:
        print(f"error: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
