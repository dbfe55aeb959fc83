"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 a size or budget limit was hit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import distribution as dist
from . import permutahedron as perm
from .core_model import Ranking, Transposition, apply_transposition, induced_ranking, parse_ranking, parse_tree, tree_to_obj
from .counting import dinv, mann_whitney_u, wilcoxon_w, xinv, xinv_via_wilcoxon
from .errors import LimitExceeded, ValidationError
from .generators import DEFAULT_SEED, PRNG_NAME, all_trees, make_rng, random_binary_tree
from .minimizer import minv as minv_value, solve
from .reductions import WeightedDigraph, extract_fas, gadget_offset, mfas_to_tree_gadget, shared_endpoint_pairs
from .traces import ComparisonDAG, decode, degree_histogram, encode, iter_linear_extensions


class UsageError(ValidationError):
    pass


@dataclass
class ExperimentConfig:
    command: str
    inputs: dict[str, str] = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    limit_n: int | None = None
    tol: float = 1e-9
    fmt: str = "table"


@dataclass
class Output:
    payload: dict[str, Any]
    header: list[str] | None = None
    rows: list[list[Any]] | None = None
    lead: str | None = None  # first line of table output
    plot: list[tuple[float, float]] | None = None


# -- helpers ------------------------------------------------------------------


def _read(path: str | None, flag: str) -> str:
    if path is None:
        raise UsageError(f"{flag} is required")
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"{flag}: cannot read {path}: {exc.strerror}") from None


def _names(text: str | None, flag: str) -> list[str]:
    if not text:
        raise UsageError(f"{flag} is required (comma-separated item names)")
    return [x.strip() for x in text.split(",") if x.strip()]


def _frac(x: Fraction) -> dict[str, int]:
    return {"num": x.numerator, "den": x.denominator}


# -- subcommands ----------------------------------------------------------------


def cmd_minv(args, cfg: ExperimentConfig) -> Output:
    tree = parse_tree(_read(args.tree, "--tree"))
    ranking = parse_ranking(_read(args.ranking, "--ranking"))
    sol = solve(tree, ranking, args.strategy)
    order = induced_ranking(tree, sol.ordering).inverse
    nodes = [{"node": s.node, "mrinv": s.mrinv, "order": list(s.best_perm)} for s in sol.nodes]
    payload = {"minv": sol.total, "leaf_order": list(order), "nodes": nodes}
    rows = [[s["node"], s["mrinv"], " ".join(map(str, s["order"]))] for s in nodes]
    return Output(payload, ["node", "mrinv", "order"], rows, lead=str(sol.total))


def _sets(args) -> tuple[Ranking, list[str], list[str]]:
    ranking = parse_ranking(_read(args.ranking, "--ranking"))
    return ranking, _names(args.set_a, "--set-a"), _names(args.set_b, "--set-b")


def cmd_xinv(args, cfg) -> Output:
    ranking, A, B = _sets(args)
    x, y = xinv(A, B, ranking), xinv(B, A, ranking)
    return Output({"xinv": x, "reverse": y, "dinv": dinv(A, B, ranking)}, lead=str(x))


def cmd_mwu(args, cfg) -> Output:
    ranking, A, B = _sets(args)
    u = mann_whitney_u(A, B, ranking)
    return Output({"u": u, "xinv": xinv(A, B, ranking), "a": len(A), "b": len(B)}, lead=str(u))


def cmd_wilcoxon(args, cfg) -> Output:
    ranking = parse_ranking(_read(args.ranking, "--ranking"))
    B = _names(args.set_b, "--set-b")
    w = wilcoxon_w(B, ranking)
    a = ranking.n - len(B)
    return Output({"w": w, "a": a, "b": len(B), "xinv": xinv_via_wilcoxon(a, len(B), w)}, lead=str(w))


def _problem(args) -> perm.Problem:
    name = args.problem
    if name == "minv-on-tree":
        return perm.minv_on_tree(parse_tree(_read(args.tree, "--tree")))
    if name == "xinv-partition":
        if args.a is None or args.b is None:
            raise UsageError("--a and --b are required for xinv-partition")
        return perm.xinv_partition(args.a, args.b)
    if args.n is None:
        raise UsageError(f"--n is required for {name}")
    if name == "selection":
        if args.r is None:
            raise UsageError("--r is required for selection")
        return perm.selection(args.n, args.r)
    return {"inversion-count": perm.inversion_count, "inversion-parity": perm.inversion_parity,
            "sorting": perm.sorting}[name](args.n)


def cmd_analyze(args, cfg) -> Output:
    problem = _problem(args)
    res = perm.analyze(problem, cfg.limit_n)
    report = res.report()
    hist = res.sizes_histogram()
    s = res.avg_sensitivity
    rows = [[k, v] for k, v in hist.items()]
    lead = f"components={res.components} s={s}"
    return Output(report, ["component_size", "count"], rows, lead=lead,
                  plot=[(float(k), float(v)) for k, v in hist.items()])


def cmd_criterion(args, cfg) -> Output:
    n = args.n
    if n is None:
        raise UsageError("--n is required")
    if args.tree:
        trees = [parse_tree(_read(args.tree, "--tree"))]
    elif args.samples:
        rng = make_rng(cfg.seed)
        trees = [random_binary_tree(n, rng) for _ in range(args.samples)]
    else:
        trees = all_trees(n, binary=True)
    limit = cfg.limit_n if cfg.limit_n is not None else 7
    checked = mismatches = 0
    examples = []
    for tree in trees:
        if tree.n > limit:
            raise LimitExceeded(f"n={tree.n} exceeds the sweep cap {limit}")
        items = tree.leaf_names
        for i in range(math.factorial(tree.n)):
            rk = perm.ranking_from_index(i, items)
            base = minv_value(tree, rk)[0]
            for r in range(1, tree.n):
                t = Transposition(r)
                res = perm.binary_criterion_check(tree, rk, t)
                same = minv_value(tree, apply_transposition(rk, t))[0] == base
                checked += 1
                if res.insensitive != same:
                    mismatches += 1
                    if len(examples) < 5:
                        examples.append({"ranking": list(rk.inverse), "r": r})
    payload = {"n": n, "trees": len(trees), "checked": checked, "mismatches": mismatches,
               "examples": examples, "seed": cfg.seed, "prng": PRNG_NAME}
    return Output(payload, lead=f"checked={checked} mismatches={mismatches}")


def cmd_dist(args, cfg) -> Output:
    table = dist.cross_inv_counts(args.a, args.b)
    payload: dict[str, Any] = {"a": args.a, "b": args.b, "total": table.total, "counts": list(table.counts)}
    if args.a >= 1 and args.b >= 1:
        p, norm = dist.max_probability(args.a, args.b)
        payload["p_max"] = _frac(p)
        payload["normalized"] = norm
    rows = [list(r) for r in table.csv_rows()]
    return Output(payload, ["a", "b", "k", "count", "probability_num", "probability_den"], rows,
                  plot=[(float(r[2]), r[4] / r[5]) for r in rows])


def cmd_charfn_verify(args, cfg) -> Output:
    approx = dist.probabilities_via_inverse_ft(args.a, args.b, cfg.tol)
    exact = dist.cross_inv_counts(args.a, args.b).probabilities()
    err = float(np.max(np.abs(approx - exact)))
    ok = err <= cfg.tol + 1e-9
    payload = {"a": args.a, "b": args.b, "tol": cfg.tol, "max_abs_error": err, "ok": ok}
    return Output(payload, lead=f"max_abs_error={err:.3e} ok={ok}",
                  plot=[(float(k), float(v)) for k, v in enumerate(approx)])


def cmd_integral(args, cfg) -> Output:
    value, norm = dist.integral_abs_charfn(args.a, args.b, cfg.tol)
    return Output({"a": args.a, "b": args.b, "value": value, "normalized": norm}, lead=f"{value:.12g}")


def cmd_match(args, cfg) -> Output:
    t = Fraction(args.t)
    bij = dist.interval_matching(args.a, args.b, t)
    rep = dist.pole_reduction_check(args.a, args.b, [float(t) * math.pi])
    payload = {"a": args.a, "b": args.b, "t": str(bij.t), "map": {str(k): v for k, v in sorted(bij.map.items())},
               "valid": bij.is_valid(), "pole_ok": rep.ok}
    rows = [[k, v] for k, v in sorted(bij.map.items())]
    return Output(payload, ["k", "ell"], rows)


def cmd_gadget(args, cfg) -> Output:
    g = WeightedDigraph.from_json(_read(args.graph, "--graph"))
    tree, ranking = mfas_to_tree_gadget(g)
    m, shared = len(g.arcs), shared_endpoint_pairs(g)
    payload = {"tree": tree_to_obj(tree), "ranking": {"ranks": dict(sorted(ranking.rank_of.items()))},
               "m": m, "shared": shared, "offset": gadget_offset(m, shared)}
    return Output(payload)


def cmd_extract_fas(args, cfg) -> Output:
    fas = extract_fas(args.minv, args.m, args.shared)
    return Output({"minv": args.minv, "m": args.m, "shared": args.shared, "fas": fas}, lead=str(fas))


def cmd_encode_check(args, cfg) -> Output:
    dag = ComparisonDAG.from_json(_read(args.dag, "--dag"))
    limit = cfg.limit_n if cfg.limit_n is not None else 8
    if dag.n > limit:
        raise LimitExceeded(f"{dag.n} items exceed the encoding-check cap {limit}")
    hist = degree_histogram(dag)
    bounds = {d: math.factorial(dag.n) // math.factorial(d + 1) for d in hist}
    roundtrip = all(decode(encode(rk, dag), dag) == rk for rk in iter_linear_extensions(dag))
    ok = roundtrip and all(hist[d] <= bounds[d] for d in hist)
    payload = {"n": dag.n, "histogram": {str(d): c for d, c in hist.items()},
               "bounds": {str(d): b for d, b in bounds.items()}, "roundtrip": roundtrip, "ok": ok}
    rows = [[d, hist[d], bounds[d]] for d in hist]
    return Output(payload, ["degree", "extensions", "bound"], rows, lead=f"ok={ok}")


def cmd_selftest(args, cfg) -> Output:
    from .selftest import run_all

    results = run_all()
    rows = [[name, "PASS" if ok else "FAIL", detail] for name, ok, detail in results]
    payload = {"results": [{"check": n, "ok": ok, "detail": d} for n, ok, d in results],
               "ok": all(ok for _, ok, _ in results)}
    return Output(payload, ["check", "status", "detail"], rows)


# -- rendering -----------------------------------------------------------------


def _table(header: list[str], rows: list[list[Any]]) -> str:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells)


def render(out: Output, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(out.payload, indent=2, sort_keys=True)
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        if out.rows is not None:
            w.writerow(out.header)
            w.writerows(out.rows)
        else:
            w.writerow(["key", "value"])
            for k in sorted(out.payload):
                v = out.payload[k]
                w.writerow([k, v if not isinstance(v, (dict, list)) else json.dumps(v, sort_keys=True)])
        return buf.getvalue().rstrip("\n")
    lines = []
    if out.lead is not None:
        lines.append(out.lead)
    if out.rows is not None:
        lines.append(_table(out.header, out.rows))  # type: ignore[arg-type]
    elif out.lead is None:
        scalars = [[k, out.payload[k]] for k in sorted(out.payload)]
        lines.append(_table(["key", "value"], [[k, json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v]
                                               for k, v in scalars]))
    return "\n".join(lines)


# -- parser --------------------------------------------------------------------

COMMANDS: dict[str, Callable] = {
    "minv": cmd_minv, "xinv": cmd_xinv, "mwu": cmd_mwu, "wilcoxon": cmd_wilcoxon,
    "analyze": cmd_analyze, "criterion": cmd_criterion, "dist": cmd_dist,
    "charfn-verify": cmd_charfn_verify, "integral": cmd_integral, "match": cmd_match,
    "gadget": cmd_gadget, "extract-fas": cmd_extract_fas, "encode-check": cmd_encode_check,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "table"], default="table")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--limit-n", type=int, default=None)
    common.add_argument("--emit-plot-data", metavar="PATH", default=None)

    p = argparse.ArgumentParser(prog="invperm", description="Inversion minimization on trees: solvers and experiments.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("minv", parents=[common], help="minimum inversions of a tree under a ranking")
    s.add_argument("--tree")
    s.add_argument("--ranking")
    s.add_argument("--strategy", choices=["auto", "exhaustive", "dp"], default="auto")

    for name in ("xinv", "mwu"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--ranking")
        s.add_argument("--set-a")
        s.add_argument("--set-b")
    s = sub.add_parser("wilcoxon", parents=[common])
    s.add_argument("--ranking")
    s.add_argument("--set-b")

    s = sub.add_parser("analyze", parents=[common], help="permutahedron report for a problem")
    s.add_argument("--problem", required=True, choices=["minv-on-tree", "xinv-partition", "inversion-count",
                                                         "inversion-parity", "selection", "sorting"])
    s.add_argument("--n", type=int)
    s.add_argument("--r", type=int)
    s.add_argument("--a", type=int)
    s.add_argument("--b", type=int)
    s.add_argument("--tree")

    s = sub.add_parser("criterion", parents=[common], help="binary sensitivity criterion sweep")
    s.add_argument("--n", type=int)
    s.add_argument("--tree")
    s.add_argument("--samples", type=int, default=0, help="random binary trees instead of all shapes")

    for name in ("dist", "charfn-verify", "integral"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("a", type=int)
        s.add_argument("b", type=int)

    s = sub.add_parser("match", parents=[common], help="interval bijection at t (period 1)")
    s.add_argument("a", type=int)
    s.add_argument("b", type=int)
    s.add_argument("t", type=str)

    s = sub.add_parser("gadget", parents=[common])
    s.add_argument("--graph")
    s = sub.add_parser("extract-fas", parents=[common])
    s.add_argument("minv", type=int)
    s.add_argument("m", type=int)
    s.add_argument("--shared", type=int, default=0, help="arc pairs sharing an endpoint")

    s = sub.add_parser("encode-check", parents=[common])
    s.add_argument("--dag")
    sub.add_parser("selftest", parents=[common])
    return p


def _write_plot(path: str, pts) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y"])
        w.writerows(pts or [])


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = ExperimentConfig(args.command, seed=args.seed, limit_n=args.limit_n, tol=args.tol, fmt=args.format)
    try:
        if args.command in ("match",):
            try:
                Fraction(args.t)
            except (ValueError, ZeroDivisionError):
                raise UsageError(f"t: cannot parse {args.t!r} as a number") from None
        out = COMMANDS[args.command](args, cfg)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LimitExceeded as exc:
        print(f"limit exceeded: {exc}", file=sys.stderr)
        return 3
    if args.emit_plot_data:
        _write_plot(args.emit_plot_data, out.plot)
    print(render(out, args.format))
    if args.command == "selftest" and not out.payload["ok"]:
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
