"""Command-line interface.

Exit codes: 0 success, 1 invalid or infeasible result, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .approx import approximate_maf
from .dfvs import is_acyclic
from .forest import Forest, is_agreement_forest
from .fpt import SearchStats, solve_maf_exact
from .generate import random_pair
from .maaf import (
    approximate_maaf,
    build_dfvs_instance,
    inheritance_graph,
    maximalize,
    minimally_refine,
)
from .oracle import brute_maaf, brute_maf
from .tree import NewickError, PhyloTree, parse_newick

DEFAULT_SEED = 12345

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INPUT = 2


class InputError(Exception):
    pass


def _source(arg: str, flag: str) -> str:
    if arg is None:
        raise InputError(f"{flag} is required")
    if os.path.exists(arg):
        return Path(arg).read_text()
    if arg.strip().endswith(";"):
        return arg  # inline Newick
    raise InputError(f"{flag}: no such file {arg!r}")


def _read_tree(arg: str, flag: str) -> PhyloTree:
    text = _source(arg, flag)
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) != 1:
        raise InputError(f"{flag}: expected exactly one tree, found {len(lines)} lines")
    try:
        return parse_newick(lines[0].strip())
    except NewickError as exc:
        raise InputError(f"{flag}: {exc}") from None


def _read_pair(args) -> tuple[PhyloTree, PhyloTree]:
    t1 = _read_tree(args.t1, "--t1")
    t2 = _read_tree(args.t2, "--t2")
    if t1.leaves != t2.leaves:
        raise InputError(
            "trees have different leaf sets: "
            f"only in t1 {sorted(t1.leaves - t2.leaves)}, only in t2 {sorted(t2.leaves - t1.leaves)}"
        )
    return t1, t2


def _emit(args, report: dict, text_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print("\n".join(text_lines))


def _forest_lines(f: Forest) -> list[str]:
    return [c.newick() for c in f]


def cmd_maf(args) -> int:
    t1, t2 = _read_pair(args)
    stats = None
    if args.max_k is not None and args.max_k < 0:
        raise InputError("--max-k must be nonnegative")
    if args.mode == "exact":
        stats = SearchStats()
        found = solve_maf_exact(t1, t2, max_k=args.max_k, stats=stats)
        if found is None:
            report = {"mode": "exact", "feasible": False, "maxK": args.max_k, "stats": stats.as_dict()}
            _emit(args, report, [f"infeasible: no agreement forest with at most {args.max_k} cuts"])
            return EXIT_INVALID
        forest, cuts = found
    else:
        forest, cuts = approximate_maf(t1, t2)
    valid = bool(is_agreement_forest(forest, t1, t2))
    report = {
        "mode": args.mode,
        "forest": _forest_lines(forest),
        "components": len(forest),
        "k": len(forest) - 1,
        "cutCount": cuts,
        "valid": valid,
        "stats": None if stats is None else stats.as_dict(),
    }
    lines = _forest_lines(forest) + [
        f"k: {len(forest) - 1}",
        f"cuts: {cuts}",
        f"valid: {str(valid).lower()}",
    ]
    if stats is not None:
        lines.append(f"search nodes: {stats.nodes}")
    _emit(args, report, lines)
    return EXIT_OK if valid else EXIT_INVALID


def cmd_maaf(args) -> int:
    t1, t2 = _read_pair(args)
    if args.dump_dfvs:
        a = solve_maf_exact(t1, t2)[0] if args.mode == "exact" else approximate_maf(t1, t2)[0]
        a = minimally_refine(t1, t2, maximalize(t1, t2, a))
        Path(args.dump_dfvs).write_text(build_dfvs_instance(t1, t2, a).to_edgelist())
    forest, k, diag = approximate_maaf(t1, t2, args.mode, args.dfvs)
    report = dict(diag)
    report.update(
        mode=args.mode,
        dfvs=args.dfvs,
        forest=_forest_lines(forest),
        hybridizationUpperBound=k,
    )
    lines = _forest_lines(forest) + [
        f"k: {k}",
        f"hybridization number <= {k}",
        f"agreement forest size |A|: {diag['mafSize']}",
        f"dfvs weight: {diag['dfvsWeight']}",
        f"acyclic: {str(diag['acyclic']).lower()}",
        f"size identity: {'holds' if diag['identityHolds'] else 'FAILS'}",
    ]
    _emit(args, report, lines)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.n is None or args.n < 2:
        raise InputError("--n must be at least 2")
    if args.moves < 0:
        raise InputError("--moves must be nonnegative")
    if not 0 <= args.polytomy < 1:
        raise InputError("--polytomy must be in [0, 1)")
    t1, t2 = random_pair(args.n, args.moves, args.seed, args.polytomy)
    a, b = t1.newick(), t2.newick()
    if args.t1:
        Path(args.t1).write_text(a + "\n")
    if args.t2:
        Path(args.t2).write_text(b + "\n")
    report = {"t1": a, "t2": b, "n": args.n, "moves": args.moves, "seed": args.seed,
              "kUpperBound": args.moves}
    if args.json:
        _emit(args, report, [])
    elif not (args.t1 and args.t2):
        print(a)
        print(b)
    return EXIT_OK


def cmd_validate(args) -> int:
    t1, t2 = _read_pair(args)
    text = _source(args.forest, "--forest")
    try:
        forest = Forest.from_newick(text)
    except NewickError as exc:
        raise InputError(f"--forest: {exc}") from None
    except ValueError as exc:
        # components sharing labels is a property of the forest, not a parse error
        report = {"agreementForest": False, "acyclic": None, "reason": str(exc), "witness": {}}
        _emit(args, report, [f"agreement forest: false ({exc})"])
        return EXIT_INVALID
    cert = is_agreement_forest(forest, t1, t2)
    acyclic = None
    edges = []
    if cert:
        ig = inheritance_graph(t1, t2, forest, check=False)
        acyclic = is_acyclic(ig)
        edges = [list(e) for e in ig.edges()]
    report = {
        "agreementForest": cert.ok,
        "acyclic": acyclic,
        "reason": cert.reason,
        "witness": json.loads(json.dumps(cert.witness, default=list)),
        "inheritanceGraph": edges,
    }
    lines = [f"agreement forest: {'true' if cert else 'false (' + cert.describe() + ')'}"]
    if acyclic is not None:
        lines.append(f"acyclic: {str(acyclic).lower()}")
        lines.append("inheritance edges: " + (" ".join(f"{u}->{v}" for u, v in edges) or "none"))
    _emit(args, report, lines)
    return EXIT_OK if cert else EXIT_INVALID


def cmd_oracle(args) -> int:
    t1, t2 = _read_pair(args)
    solve = brute_maf if args.problem == "maf" else brute_maaf
    try:
        k, forest = solve(t1, t2)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report = {"problem": args.problem, "k": k, "forest": _forest_lines(forest)}
    _emit(args, report, _forest_lines(forest) + [f"k: {k}"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="agreement-forest",
        description="Agreement forests and acyclic agreement forests of two rooted trees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def pair(p):
        p.add_argument("--t1", required=True, help="Newick file (or inline Newick) for the first tree")
        p.add_argument("--t2", required=True, help="Newick file (or inline Newick) for the second tree")
        p.add_argument("--json", action="store_true", help="print a JSON report")

    p = sub.add_parser("maf", help="agreement forest with few components")
    pair(p)
    p.add_argument("--mode", choices=["approx", "exact"], default="approx")
    p.add_argument("--max-k", type=int, default=None, help="cut budget for --mode exact")
    p.set_defaults(func=cmd_maf)

    p = sub.add_parser("maaf", help="acyclic agreement forest (hybridization number bound)")
    pair(p)
    p.add_argument("--mode", choices=["approx", "exact"], default="exact",
                   help="how the initial agreement forest is computed")
    p.add_argument("--dfvs", choices=["exact", "greedy"], default="exact")
    p.add_argument("--dump-dfvs", metavar="PATH", help="write the DFVS instance as an edge list")
    p.set_defaults(func=cmd_maaf)

    p = sub.add_parser("gen", help="random tree pair related by rSPR moves")
    p.add_argument("--n", type=int, required=True, help="number of taxa")
    p.add_argument("--moves", type=int, default=1)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--polytomy", type=float, default=0.3,
                   help="probability of contracting each internal edge")
    p.add_argument("--t1", help="write the first tree here instead of stdout")
    p.add_argument("--t2", help="write the second tree here instead of stdout")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("validate", help="check a forest against two trees")
    pair(p)
    p.add_argument("--forest", required=True, help="file with one Newick component per line")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("oracle", help="brute-force optimum for small inputs")
    pair(p)
    p.add_argument("--problem", choices=["maf", "maaf"], default="maf")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
