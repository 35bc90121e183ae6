"""Command-line front end: check, count, gen and oracle.

Reports are line-oriented ``key value`` text.  Exit status: 0 success,
10 proof rejected, 20 input parse error, 30 generation failure, 40 internal
error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import rup
from .checker import FULL, check_proof
from .cnf import DimacsError, format_dimacs, parse_dimacs
from .cpog import CpogParseError, parse_cpog, serialize_cpog
from .ddnnf import DdnnfError, parse_d4
from .evaluator import EvaluationError, function_hash, parse_weights, unweighted_count, weighted_count
from .generator import MODES, GenerationError, forward_step_count, generate
from .oracle import OracleLimitError, brute_count, brute_literal_weighted
from .pog import PogError
from .satproof import ProofError, default_solver_command, external_solve

OK, REJECTED, PARSE_ERROR, GEN_FAILURE, INTERNAL = 0, 10, 20, 30, 40


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _load_cnf(path):
    try:
        return parse_dimacs(_read(path))
    except DimacsError as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_cpog(path):
    try:
        return parse_cpog(_read(path))
    except CpogParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_weights(path):
    try:
        return parse_weights(_read(path))
    except EvaluationError as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_check(args, out) -> int:
    cnf = _load_cnf(args.cnf)
    steps = _load_cpog(args.cpog)
    if args.print_cnf:
        out.write(format_dimacs(cnf))
    if args.print_cpog:
        out.write(serialize_cpog(steps))
    result = check_proof(cnf, steps, one_sided=args.one_sided)
    print(result.verdict, file=out)
    return OK if result.verdict.accepted else REJECTED


def cmd_count(args, out) -> int:
    cnf = _load_cnf(args.cnf)
    steps = _load_cpog(args.cpog)
    weights = _load_weights(args.weights) if args.weights else None
    result = check_proof(cnf, steps)
    print(result.verdict, file=out)
    if result.verdict.status != FULL:
        print("error not counting without a full equivalence verdict", file=out)
        return REJECTED
    n = cnf.var_count
    print(f"models {unweighted_count(result.pog, n)}", file=out)
    if weights is not None:
        try:
            value = weighted_count(result.pog, weights, n)
        except EvaluationError as exc:
            raise InputError(f"{args.weights}: {exc}") from None
        print(f"weighted-count {value.to_decimal()}", file=out)
    if args.mod is not None:
        try:
            h = function_hash(result.pog, args.seed, args.mod, n)
        except EvaluationError as exc:
            raise InputError(str(exc)) from None
        print(f"hash {h}", file=out)
    return OK


def cmd_gen(args, out) -> int:
    cnf = _load_cnf(args.cnf)
    try:
        graph = parse_d4(_read(args.ddnnf))
    except DdnnfError as exc:
        raise InputError(f"{args.ddnnf}: {exc}") from None
    command = args.solver or default_solver_command()
    solver = (lambda clauses: external_solve(clauses, command)) if command else None
    try:
        result = generate(cnf, graph, mode=args.mode, lemmas=not args.no_lemmas,
                          grouping=not args.no_grouping, threshold=args.threshold, solver=solver)
    except (GenerationError, ProofError) as exc:
        print(f"error {exc}", file=out)
        return GEN_FAILURE
    except (DdnnfError, PogError) as exc:
        print(f"error graph: {exc}", file=out)
        return GEN_FAILURE
    try:
        with open(args.output, "w") as fh:
            fh.write(serialize_cpog(result.steps))
    except OSError as exc:
        print(f"error {args.output}: {exc.strerror}", file=out)
        return GEN_FAILURE
    st = result.stats
    print(f"mode {st['mode']}", file=out)
    print(f"steps {len(result.steps)}", file=out)
    print(f"forward-steps {forward_step_count(result)}", file=out)
    for key in ("assertions", "deletions", "aux_products", "lemmas", "lemma_applications",
                "lemma_fallbacks", "sat_calls", "monolithic_calls", "expansions_max"):
        print(f"{key.replace('_', '-')} {st.get(key, 0)}", file=out)
    return OK


def cmd_oracle(args, out) -> int:
    cnf = _load_cnf(args.cnf)
    weights = _load_weights(args.weights) if args.weights else None
    try:
        print(f"models {brute_count(cnf)}", file=out)
        if weights is not None:
            print(f"weighted-count {brute_literal_weighted(cnf, weights).to_decimal()}", file=out)
    except OracleLimitError as exc:
        raise InputError(str(exc)) from None
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="certcount", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="check a CPOG proof against a CNF")
    c.add_argument("cnf")
    c.add_argument("cpog")
    c.add_argument("--one-sided", action="store_true", help="accept reverse-implication-only proofs")
    c.add_argument("--print-cnf", action="store_true", help="reprint the parsed CNF")
    c.add_argument("--print-cpog", action="store_true", help="reprint the parsed proof")
    c.set_defaults(func=cmd_check)

    k = sub.add_parser("count", help="check, then count models of the verified graph")
    k.add_argument("cnf")
    k.add_argument("cpog")
    k.add_argument("--weights", help="literal weights, one '<lit> <decimal>' per line")
    k.add_argument("--mod", type=int, help="prime modulus for function hashing")
    k.add_argument("--seed", type=int, default=0, help="seed for hashing weights")
    k.set_defaults(func=cmd_count)

    g = sub.add_parser("gen", help="generate a CPOG proof from a decision-DNNF graph")
    g.add_argument("cnf")
    g.add_argument("ddnnf")
    g.add_argument("-o", "--output", required=True)
    g.add_argument("--mode", default="hybrid", choices=[*MODES, "mono"])
    g.add_argument("--no-lemmas", action="store_true")
    g.add_argument("--no-grouping", action="store_true")
    g.add_argument("--solver", help="external solver command with {cnf} and {proof} placeholders")
    g.add_argument("--threshold", type=int, default=10 ** 6, help="tree-size threshold of the hybrid rule")
    g.set_defaults(func=cmd_gen)

    o = sub.add_parser("oracle", help="brute-force model count")
    o.add_argument("cnf")
    o.add_argument("--weights")
    o.set_defaults(func=cmd_oracle)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else PARSE_ERROR
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    logging.getLogger(__name__).info("RUP backend %s", rup.BACKEND)
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"error {exc}", file=out)
        return PARSE_ERROR
    except Exception as exc:  # noqa: BLE001 - any escape here is a bug
        print(f"error internal: {type(exc).__name__}: {exc}", file=out)
        return INTERNAL


def main() -> None:
    sys.exit(run())
