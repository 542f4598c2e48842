"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 not beta-acyclic, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from .elim import InvariantViolation, solve
from .formula import CnfFormula, DimacsError, formula_hypergraph, isolated_variables, parse_dimacs, serialize_dimacs
from .gen import GenSpec, GenSpecError, generate
from .hypergraph import NotBetaAcyclic, beta_elimination_order
from .wcsp import (EvalMode, WcspdError, WcspInstance, cnf_to_count_instance, cnf_to_max_instance,
                   format_rational, parse_wcspd, serialize_wcspd)

EXIT_OK, EXIT_INPUT, EXIT_NOT_ACYCLIC, EXIT_INTERNAL = 0, 1, 2, 3

log = logging.getLogger("nestcount")


def count_models(formula: CnfFormula) -> int:
    """Exact model count over all declared variables."""
    if formula.empty_clause_count:
        return 0
    w = solve(cnf_to_count_instance(formula), EvalMode.SUM)
    if w.denominator != 1:
        raise InvariantViolation(f"model count {w} is not an integer")
    return w.numerator * 2 ** isolated_variables(formula)


def max_sat(formula: CnfFormula) -> int:
    """Maximum number of simultaneously satisfiable clauses."""
    m = solve(cnf_to_max_instance(formula), EvalMode.MAX)
    if m.denominator != 1 or m.numerator & (m.numerator - 1):
        raise InvariantViolation(f"max-CSP value {m} is not a power of two")
    return m.numerator.bit_length() - 1 + formula.tautology_count


def read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _is_wcspd(data: bytes) -> bool:
    for raw in data.splitlines():
        line = raw.split(b"#", 1)[0].strip()
        if line.startswith(b"p"):
            return line.split()[1:2] == [b"wcspd"]
    return False


def load(data: bytes) -> CnfFormula | WcspInstance:
    return parse_wcspd(data) if _is_wcspd(data) else parse_dimacs(data)


def _run_one(command: str, path: str, options: dict) -> tuple[int, str, str]:
    """Run one file; returns (exit code, stdout text, stderr text)."""
    try:
        data = read_input(path)
        if command == "count":
            n = count_models(parse_dimacs(data))
            out = f"c s type mc\ns mc {n}\n" if options.get("mcc") else f"{n}\n"
        elif command == "maxsat":
            out = f"{max_sat(parse_dimacs(data))}\n"
        elif command == "csp":
            mode = EvalMode(options.get("mode", "sum"))
            out = format_rational(solve(parse_wcspd(data), mode)) + "\n"
        elif command in ("order", "check"):
            obj = load(data)
            h = obj.hypergraph() if isinstance(obj, WcspInstance) else formula_hypergraph(obj)
            try:
                order = beta_elimination_order(h)
            except NotBetaAcyclic as exc:
                witness = " ".join(map(str, sorted(exc.witness)))
                if command == "check":
                    return EXIT_OK, f"beta-acyclic: no\nwitness: {witness}\n", ""
                raise
            if command == "check":
                out = "beta-acyclic: yes\n"
            else:
                out = "".join(f"{x}\n" for x in order)
        else:
            raise ValueError(f"unknown command {command}")
    except (DimacsError, WcspdError, OSError, UnicodeDecodeError) as exc:
        return EXIT_INPUT, "", f"{path}: input error: {exc}\n"
    except NotBetaAcyclic as exc:
        witness = " ".join(map(str, sorted(exc.witness)))
        return EXIT_NOT_ACYCLIC, "", f"{path}: not beta-acyclic; witness: {witness}\n"
    except (InvariantViolation, AssertionError) as exc:
        return EXIT_INTERNAL, "", f"{path}: internal invariant violated: {exc}\n"
    return EXIT_OK, out, ""


def _run_files(command: str, paths: Sequence[str], options: dict, jobs: int) -> int:
    if jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, [command] * len(paths), paths,
                                    [options] * len(paths)))
    else:
        results = [_run_one(command, p, options) for p in paths]
    status = EXIT_OK
    for path, (code, out, err) in zip(paths, results):
        if err:
            sys.stderr.write(err)
        if out:
            if len(paths) > 1:
                out = "".join(f"{path}: {line}\n" for line in out.splitlines())
            sys.stdout.write(out)
        status = max(status, code)
    return status


def _cmd_gen(args) -> int:
    if args.generator == "interval":
        spec = GenSpec(seed=args.seed, kind="interval-wcsp" if args.wcsp else "interval-cnf",
                       num_vars=args.vars, num_constraints=args.clauses,
                       min_arity=args.min_arity, max_arity=args.max_arity,
                       domain_size=args.domain, max_numerator=args.max_num,
                       max_denominator=args.max_den)
    else:
        spec = GenSpec(seed=args.seed, kind="hardps", base_vertices=args.base_vertices,
                       edge_prob=args.edge_prob, degree=args.degree)
    try:
        obj = generate(spec)
    except GenSpecError as exc:
        sys.stderr.write(f"invalid generator parameters: {exc}\n")
        return EXIT_INPUT
    sys.stdout.write(serialize_wcspd(obj) if isinstance(obj, WcspInstance) else serialize_dimacs(obj))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nestcount",
        description="Exact counting and optimisation on beta-acyclic CNF and weighted CSP instances.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def files(p, help_text):
        p.add_argument("files", nargs="+", metavar="FILE", help=help_text + " ('-' for stdin)")
        p.add_argument("--jobs", type=int, default=1, help="solve several files in parallel")

    p = sub.add_parser("count", help="count models of a DIMACS CNF formula")
    files(p, "DIMACS file")
    p.add_argument("--mcc", action="store_true", help="model-counting-competition output")
    p = sub.add_parser("maxsat", help="maximum number of satisfiable clauses")
    files(p, "DIMACS file")
    p = sub.add_parser("csp", help="partition function or maximum of a .wcspd instance")
    files(p, ".wcspd file")
    p.add_argument("--mode", choices=["sum", "max"], default="sum")
    p = sub.add_parser("order", help="print a beta-elimination order, one variable per line")
    p.add_argument("file", metavar="FILE")
    p = sub.add_parser("check", help="report whether the instance is beta-acyclic")
    p.add_argument("file", metavar="FILE")

    g = sub.add_parser("gen", help="generate a seeded instance")
    gsub = g.add_subparsers(dest="generator", required=True)
    gi = gsub.add_parser("interval", help="laminar-interval beta-acyclic CNF or .wcspd")
    gi.add_argument("--vars", type=int, default=10)
    gi.add_argument("--clauses", type=int, default=15)
    gi.add_argument("--min-arity", type=int, default=1)
    gi.add_argument("--max-arity", type=int, default=3)
    gi.add_argument("--wcsp", action="store_true", help="emit .wcspd instead of DIMACS")
    gi.add_argument("--domain", type=int, default=2)
    gi.add_argument("--max-num", type=int, default=20)
    gi.add_argument("--max-den", type=int, default=20)
    gi.add_argument("--seed", type=int, default=0)
    gh = gsub.add_parser("hardps", help="monotone chordal-bipartite formula family")
    gh.add_argument("--base-vertices", type=int, default=8)
    group = gh.add_mutually_exclusive_group()
    group.add_argument("--edge-prob", type=float, default=0.3)
    group.add_argument("--degree", type=int, default=None, help="random regular base graph")
    gh.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "gen":
        return _cmd_gen(args)
    if args.command in ("order", "check"):
        return _run_files(args.command, [args.file], {}, 1)
    options = {"mcc": getattr(args, "mcc", False), "mode": getattr(args, "mode", "sum")}
    return _run_files(args.command, args.files, options, args.jobs)


if __name__ == "__main__":
    sys.exit(main())
