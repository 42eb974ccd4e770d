"""Abstract syntax for terms, formulas, sequents, commands and Hoare triples.

Everything here is an immutable value (frozen dataclasses); all operations
are pure functions, so values can be shared freely between threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

ARITH_OPS = ("+", "-", "*")
REL_OPS = ("=", "<", "<=", ">", ">=")


# --- terms -----------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class BinArith:
    op: str  # one of ARITH_OPS
    left: Term
    right: Term


@dataclass(frozen=True)
class FunApp:
    name: str
    args: tuple[Term, ...]


Term = Union[Var, IntLit, BinArith, FunApp]


# --- formulas --------------------------------------------------------------

@dataclass(frozen=True)
class PredApp:
    name: str
    args: tuple[Term, ...] = ()  # () = propositional atom


@dataclass(frozen=True)
class RelAtom:
    op: str  # one of REL_OPS
    left: Term
    right: Term


@dataclass(frozen=True)
class Truth:
    pass


@dataclass(frozen=True)
class Falsity:
    pass


@dataclass(frozen=True)
class Not:
    body: Formula


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall:
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists:
    var: str
    body: Formula


Formula = Union[PredApp, RelAtom, Truth, Falsity, Not, And, Or, Implies, Forall, Exists]


# --- judgments -------------------------------------------------------------

@dataclass(frozen=True)
class Sequent:
    """Γ ⊢ Δ. Sides keep entry order for display; rules treat them as multisets."""

    left: tuple[Formula, ...]
    right: tuple[Formula, ...]


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Assign:
    var: str
    expr: Term


@dataclass(frozen=True)
class Seq:
    first: Command
    second: Command


@dataclass(frozen=True)
class If:
    cond: Formula  # quantifier-free
    then: Command
    els: Command


@dataclass(frozen=True)
class While:
    cond: Formula  # quantifier-free
    body: Command


Command = Union[Skip, Assign, Seq, If, While]


@dataclass(frozen=True)
class HoareTriple:
    pre: Formula
    command: Command
    post: Formula


@dataclass(frozen=True)
class LKGoal:
    sequent: Sequent


@dataclass(frozen=True)
class HoareGoal:
    triple: HoareTriple


Goal = Union[LKGoal, HoareGoal]


# --- free variables --------------------------------------------------------

def free_vars(x: Formula | Term) -> set[str]:
    """Term variables with a free occurrence. 0-ary predicates contribute none."""
    match x:
        case Var(name):
            return {name}
        case IntLit():
            return set()
        case BinArith(_, l, r):
            return free_vars(l) | free_vars(r)
        case FunApp(_, args) | PredApp(_, args):
            out: set[str] = set()
            for a in args:
                out |= free_vars(a)
            return out
        case RelAtom(_, l, r):
            return free_vars(l) | free_vars(r)
        case Truth() | Falsity():
            return set()
        case Not(b):
            return free_vars(b)
        case And(l, r) | Or(l, r) | Implies(l, r):
            return free_vars(l) | free_vars(r)
        case Forall(v, b) | Exists(v, b):
            return free_vars(b) - {v}
    raise TypeError(f"not a formula or term: {x!r}")


def free_vars_sequent(s: Sequent) -> set[str]:
    out: set[str] = set()
    for f in s.left + s.right:
        out |= free_vars(f)
    return out


def fresh_name(base: str, avoid: set[str]) -> str:
    """base if unused, else base with the smallest positive numeric suffix."""
    if base not in avoid:
        return base
    k = 1
    while f"{base}{k}" in avoid:
        k += 1
    return f"{base}{k}"


# --- substitution ----------------------------------------------------------

def substitute_term(t: Term, var: str, repl: Term) -> Term:
    match t:
        case Var(name):
            return repl if name == var else t
        case IntLit():
            return t
        case BinArith(op, l, r):
            return BinArith(op, substitute_term(l, var, repl), substitute_term(r, var, repl))
        case FunApp(name, args):
            return FunApp(name, tuple(substitute_term(a, var, repl) for a in args))
    raise TypeError(f"not a term: {t!r}")


def substitute(f: Formula, var: str, repl: Term) -> Formula:
    """Capture-avoiding substitution of repl for free occurrences of var."""
    match f:
        case PredApp(name, args):
            return PredApp(name, tuple(substitute_term(a, var, repl) for a in args))
        case RelAtom(op, l, r):
            return RelAtom(op, substitute_term(l, var, repl), substitute_term(r, var, repl))
        case Truth() | Falsity():
            return f
        case Not(b):
            return Not(substitute(b, var, repl))
        case And(l, r):
            return And(substitute(l, var, repl), substitute(r, var, repl))
        case Or(l, r):
            return Or(substitute(l, var, repl), substitute(r, var, repl))
        case Implies(l, r):
            return Implies(substitute(l, var, repl), substitute(r, var, repl))
        case Forall(v, b):
            return _subst_binder(Forall, v, b, var, repl)
        case Exists(v, b):
            return _subst_binder(Exists, v, b, var, repl)
    raise TypeError(f"not a formula: {f!r}")


def _subst_binder(ctor, bound: str, body: Formula, var: str, repl: Term) -> Formula:
    if bound == var:
        return ctor(bound, body)  # var is shadowed, nothing free below
    if var not in free_vars(body):
        return ctor(bound, body)
    if bound in free_vars(repl):
        # the binder would capture repl's variables: rename it first
        renamed = fresh_name(bound, free_vars(repl) | free_vars(body) | {var})
        body = substitute(body, bound, Var(renamed))
        bound = renamed
    return ctor(bound, substitute(body, var, repl))


# --- alpha-equivalence -----------------------------------------------------

def alpha_eq(a: Formula, b: Formula) -> bool:
    """Structural equality up to renaming of bound variables. No arithmetic."""
    return _alpha(a, b, {}, {}, 0)


def _alpha_term(a: Term, b: Term, env1: dict[str, int], env2: dict[str, int]) -> bool:
    match a, b:
        case Var(x), Var(y):
            d1, d2 = env1.get(x), env2.get(y)
            if d1 is None and d2 is None:
                return x == y  # both free
            return d1 == d2  # both bound at the same depth
        case IntLit(v), IntLit(w):
            return v == w
        case BinArith(op1, l1, r1), BinArith(op2, l2, r2):
            return op1 == op2 and _alpha_term(l1, l2, env1, env2) and _alpha_term(r1, r2, env1, env2)
        case FunApp(n1, a1), FunApp(n2, a2):
            return (n1 == n2 and len(a1) == len(a2)
                    and all(_alpha_term(x, y, env1, env2) for x, y in zip(a1, a2)))
    return False


def _alpha(a: Formula, b: Formula, env1: dict[str, int], env2: dict[str, int], depth: int) -> bool:
    match a, b:
        case PredApp(n1, a1), PredApp(n2, a2):
            return (n1 == n2 and len(a1) == len(a2)
                    and all(_alpha_term(x, y, env1, env2) for x, y in zip(a1, a2)))
        case RelAtom(op1, l1, r1), RelAtom(op2, l2, r2):
            return op1 == op2 and _alpha_term(l1, l2, env1, env2) and _alpha_term(r1, r2, env1, env2)
        case Truth(), Truth():
            return True
        case Falsity(), Falsity():
            return True
        case Not(x), Not(y):
            return _alpha(x, y, env1, env2, depth)
        case And(l1, r1), And(l2, r2):
            return _alpha(l1, l2, env1, env2, depth) and _alpha(r1, r2, env1, env2, depth)
        case Or(l1, r1), Or(l2, r2):
            return _alpha(l1, l2, env1, env2, depth) and _alpha(r1, r2, env1, env2, depth)
        case Implies(l1, r1), Implies(l2, r2):
            return _alpha(l1, l2, env1, env2, depth) and _alpha(r1, r2, env1, env2, depth)
        case Forall(v1, b1), Forall(v2, b2):
            return _alpha(b1, b2, {**env1, v1: depth}, {**env2, v2: depth}, depth + 1)
        case Exists(v1, b1), Exists(v2, b2):
            return _alpha(b1, b2, {**env1, v1: depth}, {**env2, v2: depth}, depth + 1)
    return False


def alpha_eq_sequent(a: Sequent, b: Sequent) -> bool:
    return (len(a.left) == len(b.left) and len(a.right) == len(b.right)
            and all(alpha_eq(x, y) for x, y in zip(a.left, b.left))
            and all(alpha_eq(x, y) for x, y in zip(a.right, b.right)))


def _alpha_command(a: Command, b: Command) -> bool:
    match a, b:
        case Skip(), Skip():
            return True
        case Assign(v1, e1), Assign(v2, e2):
            return v1 == v2 and _alpha_term(e1, e2, {}, {})
        case Seq(f1, s1), Seq(f2, s2):
            return _alpha_command(f1, f2) and _alpha_command(s1, s2)
        case If(c1, t1, e1), If(c2, t2, e2):
            return alpha_eq(c1, c2) and _alpha_command(t1, t2) and _alpha_command(e1, e2)
        case While(c1, b1), While(c2, b2):
            return alpha_eq(c1, c2) and _alpha_command(b1, b2)
    return False


def alpha_eq_goal(a: Goal, b: Goal) -> bool:
    match a, b:
        case LKGoal(s1), LKGoal(s2):
            return alpha_eq_sequent(s1, s2)
        case HoareGoal(t1), HoareGoal(t2):
            return (alpha_eq(t1.pre, t2.pre) and alpha_eq(t1.post, t2.post)
                    and _alpha_command(t1.command, t2.command))
    return False


# --- symbol signatures -----------------------------------------------------
# Within one goal a name must play a single role: predicate of a fixed arity,
# function of a fixed arity, or term variable. Used by the parser for goal
# validation and defensively by the SMT encoder.

def signatures(x) -> dict[str, set[tuple[str, int]]]:
    """Map name -> set of (kind, arity) uses, kind in {'pred','fun','var'}."""
    table: dict[str, set[tuple[str, int]]] = {}

    def add(name: str, kind: str, arity: int) -> None:
        table.setdefault(name, set()).add((kind, arity))

    def walk_term(t: Term, bound: frozenset[str]) -> None:
        match t:
            case Var(name):
                if name not in bound:
                    add(name, "var", 0)
            case IntLit():
                pass
            case BinArith(_, l, r):
                walk_term(l, bound)
                walk_term(r, bound)
            case FunApp(name, args):
                add(name, "fun", len(args))
                for a in args:
                    walk_term(a, bound)

    def walk_formula(f: Formula, bound: frozenset[str]) -> None:
        match f:
            case PredApp(name, args):
                add(name, "pred", len(args))
                for a in args:
                    walk_term(a, bound)
            case RelAtom(_, l, r):
                walk_term(l, bound)
                walk_term(r, bound)
            case Truth() | Falsity():
                pass
            case Not(b):
                walk_formula(b, bound)
            case And(l, r) | Or(l, r) | Implies(l, r):
                walk_formula(l, bound)
                walk_formula(r, bound)
            case Forall(v, b) | Exists(v, b):
                add(v, "var", 0)  # binder names count as the variable role
                walk_formula(b, bound | {v})

    def walk_command(c: Command) -> None:
        match c:
            case Skip():
                pass
            case Assign(var, expr):
                add(var, "var", 0)
                walk_term(expr, frozenset())
            case Seq(f, s):
                walk_command(f)
                walk_command(s)
            case If(cond, t, e):
                walk_formula(cond, frozenset())
                walk_command(t)
                walk_command(e)
            case While(cond, b):
                walk_formula(cond, frozenset())
                walk_command(b)

    def walk(node) -> None:
        match node:
            case Sequent(left, right):
                for f in left + right:
                    walk_formula(f, frozenset())
            case HoareTriple(pre, command, post):
                walk_formula(pre, frozenset())
                walk_command(command)
                walk_formula(post, frozenset())
            case LKGoal(s):
                walk(s)
            case HoareGoal(t):
                walk(t)
            case Var() | IntLit() | BinArith() | FunApp():
                walk_term(node, frozenset())
            case _:
                walk_formula(node, frozenset())

    walk(x)
    return table


def signature_conflicts(x) -> list[str]:
    """Human-readable conflicts: one name used in two roles or arities."""
    out = []
    for name, sigs in sorted(signatures(x).items()):
        if len(sigs) < 2:
            continue
        kinds = {k for k, _ in sigs}
        if kinds <= {"pred"} or kinds <= {"fun"}:
            arities = " and ".join(str(n) for _, n in sorted(sigs))
            out.append(f"{name} used with {arities} arguments")
        else:
            out.append(f"{name} used as " + " and ".join(
                sorted({_describe_sig(k, n) for k, n in sigs})))
    return out


def _describe_sig(kind: str, arity: int) -> str:
    if kind == "pred":
        return "a proposition" if arity == 0 else f"a predicate with {arity} argument{'s' if arity != 1 else ''}"
    if kind == "fun":
        return f"a function with {arity} argument{'s' if arity != 1 else ''}"
    return "a term variable"


def connective_count(f: Formula) -> int:
    """Number of connective/quantifier nodes; automation's termination measure."""
    match f:
        case PredApp() | RelAtom() | Truth() | Falsity():
            return 0
        case Not(b):
            return 1 + connective_count(b)
        case And(l, r) | Or(l, r) | Implies(l, r):
            return 1 + connective_count(l) + connective_count(r)
        case Forall(_, b) | Exists(_, b):
            return 1 + connective_count(b)
    raise TypeError(f"not a formula: {f!r}")


def sequent_connective_count(s: Sequent) -> int:
    return sum(connective_count(f) for f in s.left + s.right)


def formulas_of_goal(goal: Goal) -> Iterator[Formula]:
    match goal:
        case LKGoal(s):
            yield from s.left
            yield from s.right
        case HoareGoal(t):
            yield t.pre
            yield t.post
            stack: list[Command] = [t.command]
            while stack:
                c = stack.pop()
                match c:
                    case Seq(f, s):
                        stack += [f, s]
                    case If(cond, th, el):
                        yield cond
                        stack += [th, el]
                    case While(cond, b):
                        yield cond
                        stack.append(b)
                    case _:
                        pass
