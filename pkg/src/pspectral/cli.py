"""Command-line interface.

Subcommands: lambda, verify-main, verify-evaluation, verify-lemmas,
anti-wilf, chi.  Exit code 0 when all assertions pass, 1 on verification
failure (the report is still written), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .harness import (
    CertificationError,
    anti_wilf,
    anti_wilf_random_sweep,
    evaluation_rows_to_csv,
    verify_evaluation,
    verify_lemmas,
    verify_main,
)
from .hypergraph import ClassTuple, UniformHypergraph, build_complete_chromatic, weak_chromatic_number
from .solver import SolverConfig, lambda_p_classes, lambda_p_dense


def _load_graph(path: str) -> UniformHypergraph:
    with open(path, "r", encoding="utf-8") as fh:
        return UniformHypergraph.from_json_dict(json.load(fh))


def _write_report(report: dict, out: str | None, csv: str | None = None):
    text = json.dumps(report, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    if csv:
        Path(csv).write_text(evaluation_rows_to_csv(report), encoding="utf-8")


def _cfg(args) -> SolverConfig:
    return SolverConfig(
        tol=args.tol, max_iter=args.max_iter, restarts=args.restarts, seed=args.seed
    )


def _parse_p_list(text: str) -> list[float]:
    return [float(p) for p in text.split(",") if p]


def _add_solver_flags(sp):
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--restarts", type=int, default=16)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--max-iter", type=int, default=10000, dest="max_iter")


def _cmd_lambda(args) -> int:
    cfg = _cfg(args)
    if args.classes:
        sizes = tuple(sorted((int(s) for s in args.classes.split(",")), reverse=True))
        result = lambda_p_classes(ClassTuple(args.r, sizes), args.p, cfg)
    elif args.input:
        result = lambda_p_dense(_load_graph(args.input), args.p, cfg)
    else:
        print("lambda needs --classes or --input", file=sys.stderr)
        return 2
    print(f"lambda = {result.lam:.12g}")
    print(f"residual = {result.residual:.3e}")
    print(f"converged = {result.converged}")
    if result.class_values:
        print("class values =", " ".join(f"{v:.12g}" for v in result.class_values))
    return 0


def _cmd_verify_main(args) -> int:
    report = verify_main(args.r, args.k, args.n, _parse_p_list(args.p), _cfg(args))
    _write_report(report, args.out)
    return 0 if report["summary"]["ok"] else 1


def _cmd_verify_evaluation(args) -> int:
    try:
        report = verify_evaluation(
            args.r, args.k, window=args.window, p_list=_parse_p_list(args.p), cfg=_cfg(args),
            solver_comparison=not args.no_solver,
        )
    except CertificationError as exc:
        print(f"exact certification failed: {exc}", file=sys.stderr)
        return 1
    _write_report(report, args.out, args.csv)
    return 0 if report["summary"]["ok"] else 1


def _cmd_verify_lemmas(args) -> int:
    report = verify_lemmas(count=args.count, seed=args.seed)
    _write_report(report, args.out)
    return 0 if report["summary"]["ok"] else 1


def _cmd_anti_wilf(args) -> int:
    cfg = _cfg(args)
    if args.random:
        report = anti_wilf_random_sweep(args.random, args.r, args.k, args.p, args.n_max, args.seed, cfg)
        _write_report(report, args.out)
        return 0 if report["summary"]["ok"] else 1
    if not args.input:
        print("anti-wilf needs --input or --random", file=sys.stderr)
        return 2
    cert = anti_wilf(_load_graph(args.input), args.k, args.p, cfg)
    _write_report(cert, args.out)
    return 0 if cert.get("brute_force_agrees", True) else 1


def _cmd_chi(args) -> int:
    G = _load_graph(args.input)
    chi = weak_chromatic_number(G, args.max_k)
    print(f"chi = {chi}" if chi is not None else f"chi exceeds k_max = {args.max_k}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pspectral",
        description="p-spectral radii of uniform hypergraphs and extremal verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("lambda", help="solve one instance")
    sp.add_argument("--classes", help="comma-separated class sizes, e.g. 4,3")
    sp.add_argument("--r", type=int, default=3)
    sp.add_argument("--input", help="hypergraph JSON file")
    sp.add_argument("--p", type=float, required=True)
    _add_solver_flags(sp)
    sp.set_defaults(func=_cmd_lambda)

    sp = sub.add_parser("verify-main", help="balanced tuple wins the sweep")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", default="1,1.5,2,3", help="comma-separated p values")
    sp.add_argument("--out")
    _add_solver_flags(sp)
    sp.set_defaults(func=_cmd_verify_main)

    sp = sub.add_parser("verify-evaluation", help="exact certification grid")
    sp.add_argument("--r", default="3..4", help="range a..b")
    sp.add_argument("--k", default="2..3", help="range a..b")
    sp.add_argument("--window", type=int, default=20)
    sp.add_argument("--p", default="1")
    sp.add_argument("--no-solver", action="store_true", help="skip solver comparisons")
    sp.add_argument("--out")
    sp.add_argument("--csv")
    _add_solver_flags(sp)
    sp.set_defaults(func=_cmd_verify_evaluation)

    sp = sub.add_parser("verify-lemmas", help="randomized lemma suites")
    sp.add_argument("--count", type=int, default=500)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_verify_lemmas)

    sp = sub.add_parser("anti-wilf", help="spectral coloring certificate")
    sp.add_argument("--input", help="hypergraph JSON file")
    sp.add_argument("--random", type=int, help="run N random graphs instead")
    sp.add_argument("--r", type=int, default=3)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--p", type=float, default=1.0)
    sp.add_argument("--n-max", type=int, default=9, dest="n_max")
    sp.add_argument("--out")
    _add_solver_flags(sp)
    sp.set_defaults(func=_cmd_anti_wilf)

    sp = sub.add_parser("chi", help="brute-force weak chromatic number")
    sp.add_argument("--input", required=True)
    sp.add_argument("--max-k", type=int, default=6, dest="max_k")
    sp.set_defaults(func=_cmd_chi)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
