"""Command-line entry point ``liftrank``.

Exit codes: 0 on success, 2 when a verdict is unknown (solver trouble or a
level above ``--budget-level``), 1 on errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import random
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .enumeration import EnumerationFilter, catalog_solve, enumerate_knd
from .families import FamilySpec, construct, parse_family
from .figures import FIG5, FIG6
from .graph import Graph, GraphError, alpha, omega
from .graphio import from_graph6, from_json, to_graph6, to_json
from .lsplus import BudgetError, max_eps, optimize, rank_bounds
from .stretching import StretchedClique, deficiency

EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2
DIGITS = 6


class CliError(Exception):
    pass


@dataclass
class ReportRow:
    graph_id: str
    spec: str
    n: int
    alpha: int
    omega: int
    hat: bool | None = None
    tilde: bool | None = None
    deficiency: int | None = None
    optima: dict[int, float] = field(default_factory=dict)
    eps: float | None = None
    rank_lower: int | None = None
    rank_upper: int | None = None
    reference: float | None = None
    status: str = ""

    def __post_init__(self):
        if self.rank_lower is not None and self.rank_upper is not None and self.rank_lower > self.rank_upper:
            raise CliError(f"rank bounds out of order for {self.graph_id}")

    def flat(self) -> dict:
        out = {k: v for k, v in asdict(self).items() if k != "optima"}
        for level, value in sorted(self.optima.items()):
            out[f"level{level}"] = value
        return {k: _fmt(v) for k, v in out.items()}


def _fmt(v):
    if isinstance(v, float):
        if not np.isfinite(v):
            return str(v)
        return f"{v:.{DIGITS}f}"
    if isinstance(v, bool):
        return "true" if v else "false"
    return "" if v is None else v


def _emit(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(rows, indent=1) + "\n")
        return
    if not rows:
        return
    keys: list[str] = []
    for r in rows:
        keys.extend(k for k in r if k not in keys)
    w = csv.DictWriter(out, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)


# -- graph sources -------------------------------------------------------------


def _load_graph(args) -> tuple[Graph, StretchedClique | None, str]:
    """Resolve the graph options into ``(graph, stretched clique or None, id)``."""
    chosen = [x for x in ("spec", "family", "named", "graph6", "json") if getattr(args, x, None)]
    if len(chosen) != 1:
        raise CliError("give exactly one of a positional spec, --family, --named, --graph6, --json")
    if args.family:
        text = args.family if args.k is None else f"{args.family}:{args.k}"
        if args.S:
            text += f":{args.S}"
        obj = construct(parse_family(text))
        label = parse_family(text).label
    elif args.named:
        obj = construct(FamilySpec("named", name=args.named))
        label = args.named
    elif args.graph6:
        obj, label = from_graph6(args.graph6), args.graph6
    elif args.json:
        obj = from_json(Path(args.json).read_text())
        label = Path(args.json).name
    else:
        text = args.spec
        try:
            spec = parse_family(text)
        except GraphError:
            obj, label = from_graph6(text), text
        else:
            obj, label = construct(spec), spec.label
    if isinstance(obj, StretchedClique):
        return obj.graph, obj, label
    return obj, None, label


def _graph_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("spec", nargs="?", help="family spec such as a:5, b-prime:5, g21, or a graph6 string")
    p.add_argument("--family", help="family name (a, a-s, b, b-prime, h-prime)")
    p.add_argument("--k", type=int, help="family parameter")
    p.add_argument("--S", help="comma separated subset for the a-s family")
    p.add_argument("--named", help="named graph (g21, g22, g31, g41, fig7)")
    p.add_argument("--graph6", help="graph in graph6 format")
    p.add_argument("--json", help="path to a JSON graph file")


def _describe(G: Graph, SC: StretchedClique | None, label: str) -> ReportRow:
    row = ReportRow(label, label, G.n, alpha(G), omega(G))
    if SC is not None:
        row.hat, row.tilde = SC.in_hat(), SC.in_tilde()
        row.deficiency = deficiency(SC) if SC.d <= 12 else None
    return row


# -- commands ----------------------------------------------------------------------


def cmd_family(args, out) -> int:
    G, SC, label = _load_graph(args)
    if args.format == "graph6":
        out.write(to_graph6(G) + "\n")
        return EXIT_OK
    if args.format == "json" and args.adjacency:
        out.write(to_json(G) + "\n")
        return EXIT_OK
    row = _describe(G, SC, label).flat()
    row["graph6"] = to_graph6(G)
    row["edges"] = G.num_edges()
    for k in ("optima", "eps", "rank_lower", "rank_upper", "reference", "status"):
        row.pop(k, None)
    _emit([row], args.format, out)
    return EXIT_OK


def _filter(args) -> EnumerationFilter:
    return EnumerationFilter(
        require_hat=args.hat, complement_of_hat=args.nonhat, require_tilde=args.tilde, max_omega=args.max_omega
    )


def cmd_enumerate(args, out) -> int:
    res = enumerate_knd(args.n, args.d, _filter(args), cache_dir=args.cache)
    values = {}
    if args.solve_level is not None:
        if args.solve_level > args.budget_level:
            raise BudgetError(f"level {args.solve_level} exceeds --budget-level {args.budget_level}")
        values = {r.graph6: r.value for r in catalog_solve(res, args.solve_level, args.jobs)}
    if args.format == "graph6":
        for r in res.records:
            line = r.line()
            if values:
                line += f"\t{values[r.graph6]:.{DIGITS}f}"
            out.write(line + "\n")
        return EXIT_OK
    rows = []
    for r in res.records:
        row = {"graph6": r.graph6, "omega": r.omega, "alpha": r.alpha, "hat": _fmt(r.hat),
               "tilde": _fmt(r.tilde), "deficiency": r.deficiency}
        if values:
            row[f"level{args.solve_level}"] = _fmt(values[r.graph6])
        rows.append(row)
    _emit(rows, args.format, out)
    return EXIT_OK


def cmd_opt(args, out) -> int:
    G, SC, label = _load_graph(args)
    if args.level > args.budget_level:
        raise BudgetError(f"level {args.level} exceeds --budget-level {args.budget_level}")
    c = None
    if args.objective:
        c = [float(x) for x in args.objective.split(",")]
    res = optimize(G, args.level, c, graph_id=label)
    row = _describe(G, SC, label)
    row.optima = {args.level: res.value}
    row.status = res.status
    flat = row.flat()
    flat["stab"] = _fmt(res.stab_value)
    flat["frac"] = _fmt(res.frac_value)
    for k in ("eps", "rank_lower", "rank_upper", "reference"):
        flat.pop(k)
    _emit([flat], args.format, out)
    return EXIT_OK if res.status == "optimal" else EXIT_UNKNOWN


def cmd_eps(args, out) -> int:
    G, SC, label = _load_graph(args)
    if SC is None:
        raise CliError("eps needs a stretched clique (family or named graph)")
    if args.level > args.budget_level:
        raise BudgetError(f"level {args.level} exceeds --budget-level {args.budget_level}")
    res = max_eps(SC, args.level)
    row = {"graph_id": label, "level": args.level, "eps": _fmt(res.value), "verdict": res.verdict,
           "status": res.status}
    _emit([row], args.format, out)
    return EXIT_OK if res.verdict != "unknown" else EXIT_UNKNOWN


def cmd_verify_minimal(args, out) -> int:
    G, SC, label = _load_graph(args)
    if G.n % 3:
        raise CliError(f"{label} has {G.n} vertices; minimality needs a multiple of 3")
    ell = G.n // 3
    if ell - 1 > args.budget_level:
        out.write(f"{label}\tunknown\tneeds level {ell - 1} > --budget-level {args.budget_level}\n")
        return EXIT_UNKNOWN
    bounds = rank_bounds(G, budget=ell - 1)
    verdict = bounds.lower >= ell
    if args.format == "json":
        _emit([{"graph_id": label, "ell": ell, "minimal": verdict, "rank_lower": bounds.lower,
                "rank_upper": bounds.upper, "values": {str(k): round(v, DIGITS) for k, v in bounds.values.items()}}],
              "json", out)
    else:
        out.write(f"{label}\t{_fmt(verdict)}\n")
    return EXIT_OK


def _figure_rows(args, hat: bool, table) -> list[ReportRow]:
    f = EnumerationFilter(require_hat=hat, complement_of_hat=not hat, max_omega=3)
    res = enumerate_knd(5, 2, f, cache_dir=args.cache)
    solved = catalog_solve(res, 2, args.jobs)
    refs = sorted((v for _, v in table), reverse=True)
    meta = {r.graph6: r for r in res.records}
    rows = []
    for s, ref in zip(solved, refs):
        r = meta[s.graph6]
        rows.append(ReportRow(s.graph6, "K_{5,2}", r.graph.n, r.alpha, r.omega, r.hat, r.tilde, r.deficiency,
                              {2: s.value}, reference=ref, status=s.status))
    return rows


def cmd_report(args, out) -> int:
    if args.what in ("fig5", "fig6"):
        rows = _figure_rows(args, args.what == "fig5", FIG5 if args.what == "fig5" else FIG6)
        if args.rank:
            for row in rows:
                b = rank_bounds(from_graph6(row.graph_id), budget=args.budget_level)
                row.rank_lower, row.rank_upper = b.lower, b.upper
        flat = [r.flat() for r in rows]
        if not args.rank:
            for r in flat:
                r.pop("rank_lower"), r.pop("rank_upper")
        for r in flat:
            r.pop("eps")
        _emit(flat, args.format, out)
        return EXIT_OK
    targets = [
        (5, 2, EnumerationFilter(require_hat=True, max_omega=3), 13),
        (5, 2, EnumerationFilter(complement_of_hat=True, max_omega=3), 25),
        (6, 3, EnumerationFilter(require_hat=True, max_omega=3), 588),
    ]
    rows = []
    for n, d, f, ref in targets:
        res = enumerate_knd(n, d, f, cache_dir=args.cache)
        rows.append({"n": n, "d": d, "filter": f.label, "count": len(res), "reference": ref,
                     "match": _fmt(len(res) == ref)})
    _emit(rows, args.format, out)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=int, default=1, help="parallel SDP solves")
    common.add_argument("--seed", type=int, default=0, help="seed for any randomness")
    common.add_argument("--budget-level", type=int, default=2, help="highest lifting level allowed")
    common.add_argument("--format", choices=("csv", "json", "graph6"), default="csv")
    common.add_argument("--cache", help="catalog directory (defaults to $LIFTRANK_CACHE)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="liftrank", description="Lifted SDP relaxations of stable set polytopes")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("family", parents=[common], help="build a graph and print its invariants")
    _graph_options(p)
    p.add_argument("--adjacency", action="store_true", help="with --format json, print the adjacency")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("enumerate", parents=[common], help="enumerate stretched cliques up to isomorphism")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    p.add_argument("--hat", action="store_true")
    p.add_argument("--nonhat", action="store_true")
    p.add_argument("--tilde", action="store_true")
    p.add_argument("--max-omega", type=int)
    p.add_argument("--solve-level", type=int, help="also solve max e^T x at this level")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("opt", parents=[common], help="maximize a linear objective over a lifted relaxation")
    _graph_options(p)
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--objective", help="comma separated weights (default all ones)")
    p.set_defaults(func=cmd_opt)

    p = sub.add_parser("eps", parents=[common], help="largest eps with v(G, eps) in the lifted cone")
    _graph_options(p)
    p.add_argument("--level", type=int, default=1)
    p.set_defaults(func=cmd_eps)

    p = sub.add_parser("verify-minimal", parents=[common], help="check l-minimality of a 3l-vertex graph")
    _graph_options(p)
    p.set_defaults(func=cmd_verify_minimal)

    p = sub.add_parser("report", parents=[common], help="reproduce the reference tables")
    p.add_argument("what", choices=("fig5", "fig6", "counts"))
    p.add_argument("--rank", action="store_true", help="add rank bounds per graph")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    random.seed(args.seed)
    np.random.seed(args.seed)
    try:
        return args.func(args, out)
    except BudgetError as exc:
        print(f"liftrank: unknown: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (CliError, GraphError, ValueError, OSError) as exc:
        print(f"liftrank: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
