"""The solver pseudo-axiom: encode the negated sequent in SMT-LIB2, run an
external solver process on it, classify the verdict and extract countermodels.

The solver is any SMT-LIB2-speaking executable reading the script on stdin
and answering on stdout. Resolution order: explicit argument, the
PROOFKIT_SOLVER environment variable (a shell-split command), `z3` or `cvc5`
on PATH, then the repo-local Node/wasm shim under tools/z3smt.
"""

from __future__ import annotations

import os
import shlex
import shutil
import subprocess
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from .errors import ArityConflict, NotAHole, NotLKGoal, SolverNotFound
from .syntax import (And, BinArith, Exists, Falsity, Forall, Formula, FunApp, Implies, IntLit,
                     LKGoal, Not, Or, PredApp, RelAtom, Sequent, Term, Truth, Var,
                     free_vars_sequent, signature_conflicts, signatures)
from .tree import NodePath, ProofTree, close_z3_at, is_hole, node_at

SOLVER_ENV_VAR = "PROOFKIT_SOLVER"
DEFAULT_TIMEOUT = 5.0


# --- encoding ---------------------------------------------------------------

def _enc_term(t: Term) -> str:
    match t:
        case Var(name):
            return name
        case IntLit(value):
            return str(value) if value >= 0 else f"(- {-value})"
        case BinArith(op, l, r):
            return f"({op} {_enc_term(l)} {_enc_term(r)})"
        case FunApp(name, args):
            return f"({name} {' '.join(_enc_term(a) for a in args)})"
    raise TypeError(f"not a term: {t!r}")


def _enc_formula(f: Formula) -> str:
    match f:
        case PredApp(name, args):
            if not args:
                return name
            return f"({name} {' '.join(_enc_term(a) for a in args)})"
        case RelAtom(op, l, r):
            return f"({op} {_enc_term(l)} {_enc_term(r)})"
        case Truth():
            return "true"
        case Falsity():
            return "false"
        case Not(b):
            return f"(not {_enc_formula(b)})"
        case And(l, r):
            return f"(and {_enc_formula(l)} {_enc_formula(r)})"
        case Or(l, r):
            return f"(or {_enc_formula(l)} {_enc_formula(r)})"
        case Implies(l, r):
            return f"(=> {_enc_formula(l)} {_enc_formula(r)})"
        case Forall(v, b):
            return f"(forall (({v} Int)) {_enc_formula(b)})"
        case Exists(v, b):
            return f"(exists (({v} Int)) {_enc_formula(b)})"
    raise TypeError(f"not a formula: {f!r}")


def _declarations(goal: Sequent) -> list[str]:
    conflicts = signature_conflicts(goal)
    if conflicts:
        raise ArityConflict("; ".join(conflicts))
    sigs = signatures(goal)
    free = free_vars_sequent(goal)
    decls = []
    for name in sorted(sigs):
        kinds = sigs[name]
        kind, arity = next(iter(kinds))
        if kind == "pred":
            if arity == 0:
                decls.append(f"(declare-const {name} Bool)")
            else:
                decls.append(f"(declare-fun {name} ({' '.join(['Int'] * arity)}) Bool)")
        elif kind == "fun":
            decls.append(f"(declare-fun {name} ({' '.join(['Int'] * arity)}) Int)")
        elif name in free:  # bound-only variable names are not declared
            decls.append(f"(declare-const {name} Int)")
    return decls


def encode_sequent(goal: Sequent) -> str:
    """SMT-LIB2 script asserting Γ and the negation of each Δ member: the
    goal is valid iff the script is unsat."""
    lines = ["(set-option :produce-models true)", "(set-logic ALL)"]
    lines += _declarations(goal)
    lines += [f"(assert {_enc_formula(f)})" for f in goal.left]
    lines += [f"(assert (not {_enc_formula(f)}))" for f in goal.right]
    lines += ["(check-sat)", "(get-model)"]
    return "\n".join(lines) + "\n"


# --- verdicts and countermodels ----------------------------------------------

@dataclass(frozen=True)
class FunctionInterp:
    """Finite table with an else-default; default is kept verbatim (a string)
    when the solver's interpretation does not reduce to a table."""

    entries: tuple[tuple[tuple[int, ...], Union[int, bool]], ...]
    default: Union[int, bool, str]

    def lookup(self, args: tuple[int, ...]) -> Union[int, bool, str]:
        for key, val in self.entries:
            if key == args:
                return val
        return self.default


@dataclass(frozen=True)
class Countermodel:
    bool_atoms: dict[str, bool] = field(default_factory=dict)
    int_vars: dict[str, int] = field(default_factory=dict)
    functions: dict[str, FunctionInterp] = field(default_factory=dict)

    def describe(self) -> str:
        lines = []
        for name, val in sorted(self.bool_atoms.items()):
            lines.append(f"{name} = {'true' if val else 'false'}")
        for name, val in sorted(self.int_vars.items()):
            lines.append(f"{name} = {val}")
        for name, interp in sorted(self.functions.items()):
            for args, val in interp.entries:
                rendered = str(val).lower() if isinstance(val, bool) else str(val)
                lines.append(f"{name}({', '.join(map(str, args))}) = {rendered}")
            dv = interp.default
            rendered = str(dv).lower() if isinstance(dv, bool) else str(dv)
            lines.append(f"{name}(…) = {rendered} otherwise")
        return "\n".join(lines)


@dataclass(frozen=True)
class Valid:
    pass


@dataclass(frozen=True)
class Invalid:
    model: Countermodel


@dataclass(frozen=True)
class Unknown:
    reason: str  # timeout | solver-unknown | solver-error
    detail: str = ""


SmtVerdict = Union[Valid, Invalid, Unknown]


# --- model parsing -----------------------------------------------------------

def _sexp_parse_all(text: str):
    """Parse the solver's s-expressions (symbols kept as strings)."""
    toks: list[str] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in "()":
            toks.append(c)
            i += 1
        elif c == '"':  # string literal, e.g. inside (error "...")
            j = i + 1
            while j < n and text[j] != '"':
                j += 1
            toks.append(text[i:j + 1])
            i = j + 1
        elif c.isspace():
            i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in '()"':
                j += 1
            toks.append(text[i:j])
            i = j
    out, stack = [], []
    for tok in toks:
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if not stack:
                return out  # tolerate trailing noise
            done = stack.pop()
            (stack[-1] if stack else out).append(done)
        else:
            (stack[-1] if stack else out).append(tok)
    return out


def _render_sexp(s) -> str:
    if isinstance(s, list):
        return "(" + " ".join(_render_sexp(x) for x in s) + ")"
    return s


def _const_value(s) -> Union[int, bool, None]:
    if s == "true":
        return True
    if s == "false":
        return False
    if isinstance(s, str):
        try:
            return int(s)
        except ValueError:
            return None
    if isinstance(s, list) and len(s) == 2 and s[0] == "-":
        inner = _const_value(s[1])
        return -inner if isinstance(inner, int) else None
    return None


def _cond_to_args(cond, params: list[str]) -> Optional[tuple[int, ...]]:
    """(= x!0 3) or (and (= x!0 3) (= x!1 4)) -> the argument tuple."""
    eqs = []
    if isinstance(cond, list) and cond and cond[0] == "and":
        eqs = cond[1:]
    else:
        eqs = [cond]
    slots: dict[int, int] = {}
    for eq in eqs:
        if not (isinstance(eq, list) and len(eq) == 3 and eq[0] == "="):
            return None
        a, b = eq[1], eq[2]
        if isinstance(a, str) and a in params:
            idx, lit = params.index(a), _const_value(b)
        elif isinstance(b, str) and b in params:
            idx, lit = params.index(b), _const_value(a)
        else:
            return None
        if lit is None or not isinstance(lit, int) or idx in slots:
            return None
        slots[idx] = lit
    if len(slots) != len(params):
        return None
    return tuple(slots[i] for i in range(len(params)))


def _interp_function(params: list[str], body) -> FunctionInterp:
    entries: list[tuple[tuple[int, ...], Union[int, bool]]] = []
    node = body
    while isinstance(node, list) and len(node) == 4 and node[0] == "ite":
        args = _cond_to_args(node[1], params)
        val = _const_value(node[2])
        if args is None or val is None:
            return FunctionInterp((), _render_sexp(body))
        entries.append((args, val))
        node = node[3]
    default = _const_value(node)
    if default is None:
        return FunctionInterp((), _render_sexp(body))
    return FunctionInterp(tuple(entries), default)


def parse_model(output: str, goal: Sequent) -> Countermodel:
    """Extract the parts of the solver model that talk about the goal's own
    symbols; anything auxiliary is dropped."""
    goal_syms = signatures(goal)
    free = free_vars_sequent(goal)
    model = Countermodel()
    lines = output.splitlines()
    idx = next((k for k, line in enumerate(lines) if line.strip() == "sat"), None)
    body = "\n".join(lines[idx + 1:]) if idx is not None else output
    for top in _sexp_parse_all(body):
        items = top if isinstance(top, list) else [top]
        for entry in items:
            if not (isinstance(entry, list) and len(entry) >= 5 and entry[0] == "define-fun"):
                continue
            name, params_s, sort, val = entry[1], entry[2], entry[3], entry[4]
            if name not in goal_syms and name not in free:
                continue
            params = [p[0] for p in params_s] if isinstance(params_s, list) else []
            if not params:
                const = _const_value(val)
                if sort == "Bool" and isinstance(const, bool):
                    model.bool_atoms[name] = const
                elif sort == "Int" and isinstance(const, int) and not isinstance(const, bool):
                    model.int_vars[name] = const
                else:
                    model.functions[name] = FunctionInterp((), _render_sexp(val))
            else:
                model.functions[name] = _interp_function(params, val)
    return model


# --- running the solver --------------------------------------------------------

def _shim_command() -> Optional[list[str]]:
    node = shutil.which("node")
    if node is None:
        return None
    script = Path(__file__).resolve().parents[2] / "tools" / "z3smt" / "z3smt.mjs"
    if script.exists() and (script.parent / "node_modules").exists():
        return [node, str(script)]
    return None


def resolve_solver(solver: Union[str, list[str], None] = None) -> list[str]:
    if isinstance(solver, list):
        return solver
    if isinstance(solver, str) and solver.strip():
        return shlex.split(solver)
    env = os.environ.get(SOLVER_ENV_VAR, "").strip()
    if env:
        return shlex.split(env)
    z3 = shutil.which("z3")
    if z3 is not None:
        return [z3, "-in"]
    cvc5 = shutil.which("cvc5")
    if cvc5 is not None:
        return [cvc5, "--lang", "smt2"]
    shim = _shim_command()
    if shim is not None:
        return shim
    raise SolverNotFound(
        f"no SMT solver configured: set {SOLVER_ENV_VAR} to a command reading "
        "SMT-LIB2 on stdin (e.g. 'z3 -in'), or run `npm install` in tools/z3smt")


def run_solver(script: str, timeout: float,
               solver: Union[str, list[str], None] = None) -> tuple[str, str, bool]:
    """Returns (stdout, stderr, timed_out). The process is killed at timeout."""
    argv = resolve_solver(solver)
    try:
        proc = subprocess.Popen(argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                                stderr=subprocess.PIPE, text=True)
    except FileNotFoundError as e:
        raise SolverNotFound(f"solver executable not found: {argv[0]}") from e
    try:
        out, err = proc.communicate(script, timeout=timeout)
        return out, err, False
    except subprocess.TimeoutExpired:
        proc.kill()
        out, err = proc.communicate()
        return out or "", err or "", True


def check_validity(goal: Sequent, timeout: float = DEFAULT_TIMEOUT,
                   solver: Union[str, list[str], None] = None) -> SmtVerdict:
    script = encode_sequent(goal)
    out, err, timed_out = run_solver(script, timeout, solver)
    if timed_out:
        return Unknown("timeout", f"no answer within {timeout}s")
    verdict_line = next((line.strip() for line in out.splitlines()
                         if line.strip() in ("sat", "unsat", "unknown")), None)
    if verdict_line == "unsat":
        return Valid()
    if verdict_line == "sat":
        return Invalid(parse_model(out, goal))
    if verdict_line == "unknown":
        return Unknown("solver-unknown", _excerpt(out, err))
    return Unknown("solver-error", _excerpt(out, err))


def _excerpt(out: str, err: str, limit: int = 400) -> str:
    text = (err.strip() or out.strip())
    return text[:limit]


def apply_z3_axiom(proof: ProofTree, path: NodePath,
                   timeout: float = DEFAULT_TIMEOUT,
                   solver: Union[str, list[str], None] = None) -> tuple[ProofTree, SmtVerdict]:
    """Valid -> the hole at path closes with the pseudo-axiom marker;
    otherwise the tree is returned unchanged with the verdict for display."""
    node = node_at(proof, path)
    if not is_hole(node):
        raise NotAHole(f"node at {list(path)} already carries a rule")
    if not isinstance(node.goal, LKGoal):
        raise NotLKGoal("the solver pseudo-axiom applies to sequent goals only")
    verdict = check_validity(node.goal.sequent, timeout, solver)
    if isinstance(verdict, Valid):
        return close_z3_at(proof, path), verdict
    return proof, verdict
