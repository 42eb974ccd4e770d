"""Command-line front end.

Exit codes: 0 success, 1 failure (parse/check errors), 2 stuck automation or
invalid goal, 3 solver answered unknown, 64 usage errors, 69 solver missing.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import auto as auto_mod
from . import persist, smt
from .errors import ProofError, SolverNotFound
from .latex import to_latex
from .parser import ParseError, parse_preview, parse_sequent
from .pretty import pp_sequent
from .service import DEFAULT_PORT, serve
from .tree import holes, is_complete

EX_USAGE = 64
EX_UNAVAILABLE = 69


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EX_USAGE)


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="proofkit",
                  description="Proof assistant kernel for LK sequent calculus and Hoare logic.")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse text and print its canonical form")
    p.add_argument("kind", choices=["sequent", "triple", "formula", "term"])
    p.add_argument("text")

    p = sub.add_parser("auto", help="run the automatic prover on a sequent")
    p.add_argument("sequent")
    p.add_argument("--max-depth", type=int, default=auto_mod.DEFAULT_MAX_DEPTH)
    p.add_argument("--latex", action="store_true", help="print the tree as LaTeX")

    p = sub.add_parser("check", help="replay-validate a saved proof file")
    p.add_argument("file", type=Path)
    p.add_argument("--recheck-z3", action="store_true",
                   help="re-run the solver on pseudo-axiom steps")
    p.add_argument("--solver", help="solver command (default: auto-detect)")
    p.add_argument("--timeout", type=float, default=smt.DEFAULT_TIMEOUT)

    p = sub.add_parser("latex", help="emit a saved proof as LaTeX")
    p.add_argument("file", type=Path)
    p.add_argument("-o", "--output", type=Path, help="write to a file instead of stdout")

    p = sub.add_parser("z3", help="check a sequent's validity with the SMT solver")
    p.add_argument("sequent")
    p.add_argument("--timeout", type=float, default=smt.DEFAULT_TIMEOUT)
    p.add_argument("--solver", help="solver command (default: auto-detect)")

    p = sub.add_parser("serve", help="run the local session service")
    p.add_argument("--port", type=int, default=DEFAULT_PORT)
    p.add_argument("--solver", help="solver command (default: auto-detect)")
    p.add_argument("--timeout", type=float, default=smt.DEFAULT_TIMEOUT,
                   help="default solver timeout in seconds")
    p.add_argument("--static", help="serve this directory at / (the web UI build)")
    return top


def _cmd_parse(args) -> int:
    outcome = parse_preview(args.text, args.kind)
    if outcome.ok:
        print(outcome.canonical)
        return 0
    print(f"parse error at {outcome.line}:{outcome.column}: {outcome.error}",
          file=sys.stderr)
    return 1


def _cmd_auto(args) -> int:
    try:
        goal = parse_sequent(args.sequent)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 1
    result = auto_mod.auto_prove(goal, max_depth=args.max_depth)
    if isinstance(result.outcome, auto_mod.Completed):
        print(f"completed: {pp_sequent(goal)}")
        if args.latex:
            print(to_latex(result.tree), end="")
        return 0
    reason = result.outcome.reason
    if isinstance(reason, auto_mod.Ambiguous):
        spots = ", ".join(f"{side} {index}" for side, index in reason.positions)
        print(f"stuck: {reason.rule.value} could apply to several formulas ({spots}); "
              "pick one by hand", file=sys.stderr)
    elif isinstance(reason, auto_mod.NoRule):
        print("stuck: no automatic rule applies (quantifiers and atoms are left "
              "to the user)", file=sys.stderr)
    else:
        print(f"stuck: gave up after {args.max_depth} steps", file=sys.stderr)
    return 2


def _cmd_check(args) -> int:
    try:
        data = args.file.read_bytes()
    except OSError as e:
        print(f"cannot read {args.file}: {e}", file=sys.stderr)
        return 1
    try:
        proof = persist.load_proof(data, recheck_z3=args.recheck_z3,
                                   solver=args.solver, timeout=args.timeout)
    except SolverNotFound as e:
        print(f"solver not available: {e}", file=sys.stderr)
        return EX_UNAVAILABLE
    except (ProofError, ParseError) as e:
        print(f"invalid proof file: {e}", file=sys.stderr)
        return 1
    n_holes = len(holes(proof))
    status = "complete" if is_complete(proof) else f"incomplete ({n_holes} open goals)"
    print(f"ok: replayed {args.file.name}, {status}")
    return 0


def _cmd_latex(args) -> int:
    try:
        proof = persist.load_proof(args.file.read_bytes())
    except OSError as e:
        print(f"cannot read {args.file}: {e}", file=sys.stderr)
        return 1
    except (ProofError, ParseError) as e:
        print(f"invalid proof file: {e}", file=sys.stderr)
        return 1
    rendered = to_latex(proof)
    if args.output:
        args.output.write_text(rendered, encoding="utf-8")
    else:
        print(rendered, end="")
    return 0


def _cmd_z3(args) -> int:
    try:
        goal = parse_sequent(args.sequent)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 1
    try:
        verdict = smt.check_validity(goal, timeout=args.timeout, solver=args.solver)
    except SolverNotFound as e:
        print(f"solver not available: {e}", file=sys.stderr)
        return EX_UNAVAILABLE
    match verdict:
        case smt.Valid():
            print(f"valid: {pp_sequent(goal)}")
            return 0
        case smt.Invalid(model):
            print(f"invalid: {pp_sequent(goal)}")
            description = model.describe()
            if description:
                print("countermodel:")
                for line in description.splitlines():
                    print(f"  {line}")
            return 2
        case smt.Unknown(reason, detail):
            print(f"unknown ({reason}){': ' + detail if detail else ''}", file=sys.stderr)
            return 3
    return 3


def _cmd_serve(args) -> int:
    try:
        serve(port=args.port, solver=args.solver, static_dir=args.static,
              solver_timeout=args.timeout)
    except OSError as e:
        print(f"cannot bind port {args.port}: {e}", file=sys.stderr)
        return 1
    return 0


_COMMANDS = {
    "parse": _cmd_parse,
    "auto": _cmd_auto,
    "check": _cmd_check,
    "latex": _cmd_latex,
    "z3": _cmd_z3,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
