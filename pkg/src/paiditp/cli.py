"""Command-line driver: ``itp FILE [options]``."""

from __future__ import annotations

import argparse
import sys

from .axioms import QuantifiedFunctionArgs
from .calculus import export_trace
from .pipeline import interpolate
from .prover import FC_ORDERS, STRATEGIES, ProverConfig
from .sexpr import ParseError, SortError, parse_problem, print_formula
from .verify import VERIFIED, check_interpolant

EXIT_OK, EXIT_SAT, EXIT_UNKNOWN, EXIT_INPUT = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="itp", description="Craig interpolants for Presburger arithmetic with uninterpreted symbols.")
    ap.add_argument("file", help="problem file")
    ap.add_argument("--verify", action="store_true", help="check the interpolant and print a report")
    ap.add_argument("--proof", metavar="PATH", help="write the proof trace to PATH")
    ap.add_argument("--div-form", action="store_true", help="print a quantifier-free interpolant using div")
    ap.add_argument("--relational", action="store_true", help="keep graph predicates instead of function terms")
    ap.add_argument("--fc-order", choices=FC_ORDERS, default="derivation")
    ap.add_argument("--strategy", choices=STRATEGIES, default="restricted")
    ap.add_argument("--budget", type=int, default=100_000, metavar="NODES")
    ap.add_argument("--bound", type=int, default=4, metavar="B", help="domain bound for refutation search")
    ap.add_argument("--timeout", type=float, default=None, metavar="SEC")
    return ap


def run(argv, out=sys.stdout, err=sys.stderr) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as ex:
        return EXIT_OK if ex.code == 0 else EXIT_INPUT
    try:
        with open(args.file, encoding="utf-8") as fh:
            problem = parse_problem(fh.read())
    except (OSError, UnicodeDecodeError) as ex:
        print(f"error: {ex}", file=err)
        return EXIT_INPUT
    except (ParseError, SortError) as ex:
        print(f"error: {ex}", file=err)
        return EXIT_INPUT
    config = ProverConfig(strategy=args.strategy, fc_order=args.fc_order, max_nodes=args.budget, timeout=args.timeout)
    try:
        res = interpolate(problem.part_a, problem.part_b, config, relational=args.relational, div_form=args.div_form)
    except QuantifiedFunctionArgs as ex:
        print(f"error: unsupported input: {ex}", file=err)
        return EXIT_INPUT
    if res.status == "satisfiable":
        print("satisfiable", file=out)
        return EXIT_SAT
    if res.status == "unknown":
        print("unknown", file=out)
        print(f"reason: {res.reason}", file=err)
        return EXIT_UNKNOWN
    if args.proof:
        with open(args.proof, "w", encoding="utf-8") as fh:
            fh.write(export_trace(res.proof))
    print(print_formula(res.interpolant), file=out)
    if args.verify:
        config = ProverConfig(strategy=args.strategy, max_nodes=args.budget, timeout=args.timeout)
        report = check_interpolant(problem.part_a, problem.part_b, res.interpolant, res.relational, config, args.bound)
        print(report, file=out)
        if report.verdict != VERIFIED:
            return EXIT_UNKNOWN
    return EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
