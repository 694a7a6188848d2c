"""Command-line front end: generate graphs, analyze them, export artifacts.

Outputs are deterministic: identical invocations produce byte-identical
files (floats at 17 significant digits, fixed key order, atomic writes).
"""

import argparse
import json
import os
import sys

from .arch_graph import build_dag, graph_to_json, load_graph, write_atomic
from .arch_spec import build_arch_spec, to_json as arch_to_json
from .errors import FormatError
from .fold_schedule import build_schedule
from .metrics import (
    cdf,
    cdf_csv,
    dominance_compare,
    format_float,
    incoherence,
    metrics_json,
    path_spectrum,
)
from .svg import line_chart

# reference values the table1 command reports against
REFERENCE_Q = {1: 0.8523, 2: 0.8904, 3: 0.8950, 4: 0.9124}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nodes_arg(text):
    value = int(text)
    if value < 3:
        raise argparse.ArgumentTypeError(f"must be >= 3, got {value}")
    return value


def _graph_for(t, layers):
    if t > layers:
        print(
            f"warning: fold depth {t} exceeds layer count {layers}; "
            "warmup never ends and the schedule degenerates to all ones",
            file=sys.stderr,
        )
    return build_dag(build_schedule(layers, t))


def _layers_from(args):
    if args.layers is not None:
        return args.layers
    return args.nodes - 2


def _cmd_gen(args):
    graph = _graph_for(args.t, _layers_from(args))
    write_atomic(args.out, graph_to_json(graph))
    return 0


def _cmd_analyze(args):
    graph = load_graph(getattr(args, "in"))
    write_atomic(args.out, metrics_json(graph))
    return 0


def _cmd_spectrum(args):
    graph = load_graph(getattr(args, "in"))
    spectrum = path_spectrum(graph)
    fmt = args.format or ("svg" if args.out.endswith(".svg") else "csv")
    if fmt == "csv":
        write_atomic(args.out, cdf_csv(spectrum))
    else:
        label = f"t={graph.fold_depth}" if graph.fold_depth else "graph"
        chart = line_chart(
            [(label, list(cdf(spectrum)))],
            title=f"Path length CDF ({graph.num_nodes} nodes)",
            xlabel="path length (edges)",
            ylabel="cumulative fraction of paths",
        )
        write_atomic(args.out, chart)
    return 0


def _cmd_compare(args):
    spectrum_a = path_spectrum(load_graph(args.a))
    spectrum_b = path_spectrum(load_graph(args.b))
    report = dominance_compare(spectrum_a, spectrum_b)
    print(f"dominates: {report.dominates.value}")
    for k, d in report.deltas:
        print(f"  length {k}: delta {format_float(d)}")
    if args.out:
        deltas = ", ".join(f"[{k}, {format_float(d)}]" for k, d in report.deltas)
        write_atomic(
            args.out,
            "{"
            f'"dominates": "{report.dominates.value}", '
            f'"deltas": [{deltas}]'
            "}\n",
        )
    return 0


def _cmd_archspec(args):
    seed = None
    env_seed = os.environ.get("FOLDNET_SEED")
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError:
            print(f"error: FOLDNET_SEED must be an integer, got {env_seed!r}", file=sys.stderr)
            raise SystemExit(1)
    spec = build_arch_spec(args.blocks, args.block_kind, args.t, args.classes, seed=seed)
    write_atomic(args.out, arch_to_json(spec))
    return 0


def _cmd_table1(args):
    n = args.nodes
    print(f"incoherence parameter q at {n} nodes ({n - 2} blocks)")
    print("fold_depth  q                    reference  delta")
    for t in (1, 2, 3, 4):
        q = incoherence(_graph_for(t, n - 2)).q
        ref = REFERENCE_Q[t]
        print(f"t={t}         {format_float(q):<20s} {ref:.4f}     {q - ref:+.4f}")
    return 0


def _cmd_fig5(args):
    n = args.nodes
    rows = ["t,length,count,cdf"]
    series = []
    for t in (1, 2, 3, 4):
        spectrum = path_spectrum(_graph_for(t, n - 2))
        points = cdf(spectrum)
        for (k, c), (_, f) in zip(spectrum.counts, points):
            rows.append(f"{t},{k},{c},{format_float(f)}")
        series.append((f"t={t}", list(points)))
    write_atomic(args.out_csv, "\n".join(rows) + "\n")
    chart = line_chart(
        series,
        title=f"Path length CDF overlay ({n} nodes)",
        xlabel="path length (edges)",
        ylabel="cumulative fraction of paths",
    )
    write_atomic(args.out_svg, chart)
    return 0


def _parser():
    parser = _Parser(prog="foldnet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a graph JSON file")
    gen.add_argument("--t", type=_positive, required=True, help="fold depth")
    size = gen.add_mutually_exclusive_group(required=True)
    size.add_argument("--layers", type=_positive, help="block count")
    size.add_argument("--nodes", type=_nodes_arg, help="node count (layers + 2)")
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=_cmd_gen)

    analyze = sub.add_parser("analyze", help="write metrics JSON for a graph file")
    analyze.add_argument("--in", required=True)
    analyze.add_argument("--out", required=True)
    analyze.set_defaults(func=_cmd_analyze)

    spectrum = sub.add_parser("spectrum", help="export the path-length CDF")
    spectrum.add_argument("--in", required=True)
    spectrum.add_argument("--out", required=True)
    spectrum.add_argument("--format", choices=("csv", "svg"))
    spectrum.set_defaults(func=_cmd_spectrum)

    compare = sub.add_parser("compare", help="CDF dominance report for two graphs")
    compare.add_argument("--a", required=True)
    compare.add_argument("--b", required=True)
    compare.add_argument("--out")
    compare.set_defaults(func=_cmd_compare)

    archspec = sub.add_parser("archspec", help="write a trainable-network spec")
    archspec.add_argument("--blocks", type=_positive, required=True)
    archspec.add_argument("--block-kind", choices=("bottleneck", "xception"), required=True)
    archspec.add_argument("--t", type=_positive, required=True)
    archspec.add_argument("--classes", type=int, choices=(10, 100), required=True)
    archspec.add_argument("--out", required=True)
    archspec.set_defaults(func=_cmd_archspec)

    table1 = sub.add_parser("table1", help="print q for fold depths 1..4")
    table1.add_argument("--nodes", type=_nodes_arg, default=20)
    table1.set_defaults(func=_cmd_table1)

    fig5 = sub.add_parser("fig5", help="write overlaid CDFs as CSV and SVG")
    fig5.add_argument("--nodes", type=_nodes_arg, default=20)
    fig5.add_argument("--out-csv", required=True)
    fig5.add_argument("--out-svg", required=True)
    fig5.set_defaults(func=_cmd_fig5)

    return parser


def run(argv) -> int:
    """Parse and execute; returns the process exit status."""
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (FormatError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # internal invariant failure
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
