"""Unicode pretty-printer for the surface syntax.

Output reparses to a structurally identical AST. Operands of a different
binary connective are always parenthesized (so the reader never needs the
precedence table); same-connective chains stay bare on their associative
side. Quantified subformulas print bare only in tail position, where the
body can extend maximally right without changing the parse.
"""

from __future__ import annotations

from .syntax import (And, Assign, BinArith, Command, Exists, Falsity, Forall, Formula, FunApp,
                     Goal, HoareGoal, HoareTriple, If, Implies, IntLit, LKGoal, Not, Or, PredApp,
                     RelAtom, Seq, Sequent, Skip, Term, Truth, Var, While)

ARITH_SYM = {"+": "+", "-": "−", "*": "×"}
REL_SYM = {"=": "=", "<": "<", "<=": "≤", ">": ">", ">=": "≥"}

# precedence levels for terms: additive 1, multiplicative 2, atoms 3
_TERM_LEVEL = {"+": 1, "-": 1, "*": 2}


def pp_term(t: Term, level: int = 1) -> str:
    match t:
        case Var(name):
            return name
        case IntLit(value):
            return str(value)
        case FunApp(name, args):
            return f"{name}({', '.join(pp_term(a, 1) for a in args)})"
        case BinArith(op, l, r):
            own = _TERM_LEVEL[op]
            s = f"{pp_term(l, own)} {ARITH_SYM[op]} {pp_term(r, own + 1)}"
            return f"({s})" if level > own else s
    raise TypeError(f"not a term: {t!r}")


def pp_formula(f: Formula, rightmost: bool = True) -> str:
    match f:
        case PredApp(name, args):
            return name if not args else f"{name}({', '.join(pp_term(a, 1) for a in args)})"
        case RelAtom(op, l, r):
            return f"{pp_term(l, 1)} {REL_SYM[op]} {pp_term(r, 1)}"
        case Truth():
            return "⊤"
        case Falsity():
            return "⊥"
        case Not(b):
            return "¬" + _operand(b, "not", "right", rightmost)
        case And(l, r):
            return _binary(l, r, "and", "∧", rightmost)
        case Or(l, r):
            return _binary(l, r, "or", "∨", rightmost)
        case Implies(l, r):
            return _binary(l, r, "implies", "⇒", rightmost)
        case Forall(v, b):
            return f"∀{v}. {pp_formula(b, True)}"
        case Exists(v, b):
            return f"∃{v}. {pp_formula(b, True)}"
    raise TypeError(f"not a formula: {f!r}")


_ASSOC_SIDE = {"and": "left", "or": "left", "implies": "right"}
_OP_OF = {And: "and", Or: "or", Implies: "implies"}


def _binary(l: Formula, r: Formula, op: str, sym: str, rightmost: bool) -> str:
    return f"{_operand(l, op, 'left', rightmost)} {sym} {_operand(r, op, 'right', rightmost)}"


def _operand(f: Formula, parent: str, side: str, parent_rightmost: bool) -> str:
    # the operand ends the current group only on the right edge
    if parent == "not":
        rightmost = parent_rightmost
    else:
        rightmost = parent_rightmost and side == "right"
    match f:
        case And() | Or() | Implies():
            op = _OP_OF[type(f)]
            if parent != "not" and op == parent and side == _ASSOC_SIDE[op]:
                return pp_formula(f, rightmost)
            return f"({pp_formula(f, True)})"
        case Forall() | Exists():
            return pp_formula(f, True) if rightmost else f"({pp_formula(f, True)})"
        case RelAtom() if parent == "not":
            return f"({pp_formula(f, True)})"  # ¬(x ≥ 1), not the misleading ¬x ≥ 1
        case _:
            return pp_formula(f, rightmost)


def pp_sequent(s: Sequent) -> str:
    left = ", ".join(pp_formula(f) for f in s.left)
    right = ", ".join(pp_formula(f) for f in s.right)
    if left and right:
        return f"{left} ⊢ {right}"
    if left:
        return f"{left} ⊢"
    if right:
        return f"⊢ {right}"
    return "⊢"


def pp_command(c: Command) -> str:
    match c:
        case Skip():
            return "skip"
        case Assign(var, expr):
            return f"{var} := {pp_term(expr, 1)}"
        case Seq(first, second):
            return f"{pp_command(first)} ; {pp_command(second)}"
        case If(cond, then, els):
            return f"if {pp_formula(cond)} then {pp_command(then)} else {pp_command(els)} end"
        case While(cond, body):
            return f"while {pp_formula(cond)} do {pp_command(body)} end"
    raise TypeError(f"not a command: {c!r}")


def pp_triple(t: HoareTriple) -> str:
    return f"{{{pp_formula(t.pre)}}} {pp_command(t.command)} {{{pp_formula(t.post)}}}"


def pp_goal(g: Goal) -> str:
    match g:
        case LKGoal(s):
            return pp_sequent(s)
        case HoareGoal(t):
            return pp_triple(t)
    raise TypeError(f"not a goal: {g!r}")


def pp(node) -> str:
    """Pretty-print any syntax value by shape."""
    match node:
        case Sequent():
            return pp_sequent(node)
        case HoareTriple():
            return pp_triple(node)
        case LKGoal() | HoareGoal():
            return pp_goal(node)
        case Var() | IntLit() | BinArith() | FunApp():
            return pp_term(node)
        case Skip() | Assign() | Seq() | If() | While():
            return pp_command(node)
        case _:
            return pp_formula(node)
