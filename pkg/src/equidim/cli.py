"""Command-line interface: ``equidim {gen,solve,verify,construct,table,bisector}``.

Exit codes: 0 success, 2 verification failure, 3 timeout, 4 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .constructions import construct_witness, xi_closed_form
from .equalizer import bisector, is_equalizer_set
from .errors import CacheCorruptionError, EquidimError, SolverTimeout
from .graph import (
    Graph,
    all_pairs_distances,
    complete,
    cycle,
    dumps_graph,
    format_label,
    grid,
    hamming2,
    hypercube,
    loads_graph,
    parse_label,
    path,
    prism,
)
from .records import ResultCache, compute_grid_table, default_cache_path, file_key, solve_cached

EXIT_OK = 0
EXIT_VERIFY_FAILED = 2
EXIT_TIMEOUT = 3
EXIT_INPUT = 4

# family name -> (arity, builder)
GRAPH_FAMILIES = {
    "path": (1, path),
    "cycle": (1, cycle),
    "complete": (1, complete),
    "hypercube": (1, hypercube),
    "prism": (1, prism),
    "grid": (2, grid),
    "hamming": (2, hamming2),
}
CONSTRUCT_FAMILIES = {"hamming": "hamming2", "hypercube": "hypercube", "prism": "prism_cycle", "grid": "grid_square"}


class InputError(EquidimError):
    pass


def build_family(name: str, params: Sequence[str]) -> Graph:
    if name not in GRAPH_FAMILIES:
        raise InputError(f"unknown family {name!r}; choose from {', '.join(GRAPH_FAMILIES)}")
    arity, builder = GRAPH_FAMILIES[name]
    if len(params) != arity:
        raise InputError(f"{name} takes {arity} integer parameter(s)")
    try:
        values = [int(p) for p in params]
    except ValueError:
        raise InputError(f"parameters for {name} must be integers") from None
    return builder(*values)


def load_input(args: argparse.Namespace) -> tuple[Graph, str]:
    """Graph plus its cache key, from ``--family`` or a graph file."""
    if args.family:
        g = build_family(args.family[0], args.family[1:])
        return g, g.family_tag or " ".join(args.family)
    if not args.input:
        raise InputError("give a graph file or --family NAME PARAMS...")
    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc}") from None
    return loads_graph(text), file_key(text)


def fmt_set(labels) -> str:
    return "{" + ", ".join(format_label(tuple(lab)) for lab in labels) + "}"


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", nargs="?", help="graph file (edge-list format)")
    p.add_argument("--family", nargs="+", metavar="ARG", help="family name followed by its parameters")


def cmd_gen(args: argparse.Namespace) -> int:
    g = build_family(args.name, args.params)
    text = dumps_graph(g)
    if args.output:
        Path(args.output).write_text(text)
        print(f"wrote {args.output}: {g.order} vertices, {g.size} edges")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    g, key = load_input(args)
    cache_path = default_cache_path(args.cache)
    cache = ResultCache(cache_path) if cache_path else None
    try:
        rec, hit = solve_cached(g, args.strategy, args.budget, cache, key)
    except SolverTimeout as exc:
        b = exc.bounds
        if args.format == "json":
            print(json.dumps({"graph": key, "status": "timeout", "lower": b.lower, "upper": b.upper}))
        else:
            print(f"timeout: {b.lower} <= xi <= {b.upper}")
        return EXIT_TIMEOUT
    d = all_pairs_distances(g)
    verified = is_equalizer_set(g, d, g.indices(rec.basis_labels())).is_equalizer
    if args.format == "json":
        out = {
            "graph": key,
            "xi": rec.xi,
            "basis": rec.basis,
            "strategy": rec.strategy,
            "nodes": rec.nodes,
            "millis": rec.millis,
            "verified": verified,
        }
        print(json.dumps(out))
    else:
        print(f"graph: {key}")
        print(f"xi = {rec.xi}")
        print(f"basis: {fmt_set(rec.basis_labels())}")
        print(f"strategy: {rec.strategy}{' (cached)' if hit else ''}")
        print(f"nodes: {rec.nodes}  time: {rec.millis:.1f} ms  verified: {verified}")
    return EXIT_OK if verified else EXIT_VERIFY_FAILED


def cmd_verify(args: argparse.Namespace) -> int:
    g, _ = load_input(args)
    if args.set is None:
        raise InputError("--set is required")
    s = g.indices(parse_label(t, g) for t in args.set)
    d = all_pairs_distances(g)
    res = is_equalizer_set(g, d, s)
    if args.format == "json":
        out = {"is_equalizer": res.is_equalizer}
        if res.uncovered_pair:
            out["uncovered_pair"] = [list(g.label(v)) for v in res.uncovered_pair]
        print(json.dumps(out))
    elif res.is_equalizer:
        print("true")
    else:
        x, y = res.uncovered_pair
        print(f"false: pair {{{format_label(g.label(x))}, {format_label(g.label(y))}}} is not equalized")
    return EXIT_OK if res.is_equalizer else EXIT_VERIFY_FAILED


def cmd_construct(args: argparse.Namespace) -> int:
    if args.name not in CONSTRUCT_FAMILIES:
        raise InputError(f"construct supports {', '.join(CONSTRUCT_FAMILIES)}")
    family = CONSTRUCT_FAMILIES[args.name]
    try:
        params = [int(p) for p in args.params]
    except ValueError:
        raise InputError("parameters must be integers") from None
    if family == "grid_square":
        if len(params) == 2 and params[0] != params[1]:
            raise InputError("grid witnesses exist only for square grids")
        params = params[:1]
    witness = construct_witness(family, params)
    cf = xi_closed_form(family, params)
    g = build_family(args.name, [str(p) for p in (params * 2 if args.name == "grid" else params)])
    ok = is_equalizer_set(g, all_pairs_distances(g), g.indices(witness.vertices)).is_equalizer
    if args.format == "json":
        print(
            json.dumps(
                {
                    "family": family,
                    "params": params,
                    "witness": [list(v) for v in witness.vertices],
                    "size": len(witness),
                    "construction": witness.theorem_tag,
                    "closed_form": {"lower": cf.lower, "upper": cf.upper, "value": cf.value},
                    "verified": ok,
                }
            )
        )
    else:
        print(f"{witness.theorem_tag}: {fmt_set(witness.vertices)}")
        print(f"size: {len(witness)}")
        value = cf.value if cf.value is not None else f"in [{cf.lower}, {cf.upper}]"
        print(f"closed form xi: {value}")
        print(f"verified: {str(ok).lower()}")
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_table(args: argparse.Namespace) -> int:
    cache_path = default_cache_path(args.cache)
    cache = ResultCache(cache_path) if cache_path else None
    table = compute_grid_table(
        args.k_max, args.n_max, args.budget, cache=cache, strategy=args.strategy, jobs=args.jobs
    )
    text = table.to_json() if args.format == "json" else table.to_csv()
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    timeouts = sum(c.status == "timeout" for c in table.cells.values())
    return EXIT_TIMEOUT if timeouts else EXIT_OK


def cmd_bisector(args: argparse.Namespace) -> int:
    g, _ = load_input(args)
    v, w = g.index(parse_label(args.v, g)), g.index(parse_label(args.w, g))
    out = bisector(g, all_pairs_distances(g), v, w)
    labels = g.labels_of(out)
    if args.format == "json":
        print(json.dumps([list(lab) for lab in labels]))
    else:
        print(fmt_set(labels))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="equidim", description="Equidistant dimension of small graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, formats=("text", "json")) -> None:
        p.add_argument("--format", choices=formats, default=formats[0])

    p = sub.add_parser("gen", help="write a family graph in edge-list format")
    p.add_argument("name", choices=sorted(GRAPH_FAMILIES))
    p.add_argument("params", nargs="+")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="compute xi exactly")
    _add_graph_args(p)
    p.add_argument("--strategy", choices=["auto", "enum", "seeded"], default="auto")
    p.add_argument("--budget", type=float, default=60.0, help="seconds")
    p.add_argument("--cache")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check whether a vertex set is a distance-equalizer set")
    _add_graph_args(p)
    p.add_argument("--set", nargs="+", metavar="LABEL", help="labels such as 3, (1,2) or 0110")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", help="print and verify a family witness set")
    p.add_argument("name", choices=sorted(CONSTRUCT_FAMILIES))
    p.add_argument("params", nargs="+")
    common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("table", help="regenerate the grid excess table q(k, n)")
    p.add_argument("k_max", type=int)
    p.add_argument("n_max", type=int)
    p.add_argument("--budget", type=float, default=60.0, help="seconds per cell")
    p.add_argument("--strategy", choices=["auto", "enum", "seeded"], default="seeded")
    p.add_argument("--cache")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output")
    common(p, ("csv", "json"))
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("bisector", help="vertices equidistant from V and W")
    _add_graph_args(p)
    p.add_argument("--v", required=True)
    p.add_argument("--w", required=True)
    common(p)
    p.set_defaults(func=cmd_bisector)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "budget", 1.0) is not None and getattr(args, "budget", 1.0) <= 0:
        print("error: budget must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except CacheCorruptionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    except (EquidimError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
