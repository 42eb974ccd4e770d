"""LaTeX emission of proof trees in bussproofs syntax.

Holes render as a vertical-dots axiom over their goal; zero-premise closures
as labeled axioms. The solver pseudo-axiom keeps its distinct Z3 label so a
hand-waved goal can never pass as a calculus step. Output is deterministic.
"""

from __future__ import annotations

from .hoare import HoareRule
from .lk import LKRule
from .syntax import (And, Assign, BinArith, Command, Exists, Falsity, Forall, Formula, FunApp,
                     Goal, HoareGoal, HoareTriple, If, Implies, IntLit, LKGoal, Not, Or, PredApp,
                     RelAtom, Seq, Sequent, Skip, Term, Truth, Var, While)
from .tree import ProofTree

_REL_TEX = {"=": "=", "<": "<", "<=": r"\le", ">": ">", ">=": r"\ge"}
_ARITH_TEX = {"+": "+", "-": "-", "*": r"\times"}
_TERM_LEVEL = {"+": 1, "-": 1, "*": 2}

RULE_TEX = {
    LKRule.Id: r"\textsc{Id}", LKRule.Cut: r"\textsc{Cut}",
    LKRule.AndL: r"$\land_L$", LKRule.AndR: r"$\land_R$",
    LKRule.OrL: r"$\lor_L$", LKRule.OrR: r"$\lor_R$",
    LKRule.ImpL: r"$\Rightarrow_L$", LKRule.ImpR: r"$\Rightarrow_R$",
    LKRule.NotL: r"$\lnot_L$", LKRule.NotR: r"$\lnot_R$",
    LKRule.ForallL: r"$\forall_L$", LKRule.ForallR: r"$\forall_R$",
    LKRule.ExistsL: r"$\exists_L$", LKRule.ExistsR: r"$\exists_R$",
    LKRule.WeakL: r"$W_L$", LKRule.WeakR: r"$W_R$",
    LKRule.ContrL: r"$C_L$", LKRule.ContrR: r"$C_R$",
    LKRule.TruthR: r"$\top_R$", LKRule.FalsityL: r"$\bot_L$",
    LKRule.Z3Axiom: r"\textsc{Z3}",
    HoareRule.HSkip: r"\textsc{Skip}", HoareRule.HAssign: r"\textsc{Assign}",
    HoareRule.HSeq: r"\textsc{Seq}", HoareRule.HIf: r"\textsc{If}",
    HoareRule.HWhile: r"\textsc{While}", HoareRule.HConseq: r"\textsc{Conseq}",
}

_INF = {1: r"\UnaryInfC", 2: r"\BinaryInfC", 3: r"\TrinaryInfC"}


def tex_term(t: Term, level: int = 1) -> str:
    match t:
        case Var(name):
            return _tex_name(name)
        case IntLit(value):
            return str(value)
        case FunApp(name, args):
            return f"{_tex_name(name)}({', '.join(tex_term(a, 1) for a in args)})"
        case BinArith(op, l, r):
            own = _TERM_LEVEL[op]
            s = f"{tex_term(l, own)} {_ARITH_TEX[op]} {tex_term(r, own + 1)}"
            return f"({s})" if level > own else s
    raise TypeError(f"not a term: {t!r}")


def _tex_name(name: str) -> str:
    return rf"\mathit{{{name}}}" if len(name) > 1 else name


def tex_formula(f: Formula, rightmost: bool = True) -> str:
    match f:
        case PredApp(name, args):
            if not args:
                return _tex_name(name)
            return f"{_tex_name(name)}({', '.join(tex_term(a, 1) for a in args)})"
        case RelAtom(op, l, r):
            return f"{tex_term(l, 1)} {_REL_TEX[op]} {tex_term(r, 1)}"
        case Truth():
            return r"\top"
        case Falsity():
            return r"\bot"
        case Not(b):
            return r"\lnot " + _tex_operand(b, "not", "right", rightmost)
        case And(l, r):
            return _tex_binary(l, r, "and", r"\land", rightmost)
        case Or(l, r):
            return _tex_binary(l, r, "or", r"\lor", rightmost)
        case Implies(l, r):
            return _tex_binary(l, r, "implies", r"\Rightarrow", rightmost)
        case Forall(v, b):
            return rf"\forall {_tex_name(v)}.\, {tex_formula(b, True)}"
        case Exists(v, b):
            return rf"\exists {_tex_name(v)}.\, {tex_formula(b, True)}"
    raise TypeError(f"not a formula: {f!r}")


_ASSOC_SIDE = {"and": "left", "or": "left", "implies": "right"}
_OP_OF = {And: "and", Or: "or", Implies: "implies"}


def _tex_binary(l: Formula, r: Formula, op: str, sym: str, rightmost: bool) -> str:
    return f"{_tex_operand(l, op, 'left', rightmost)} {sym} {_tex_operand(r, op, 'right', rightmost)}"


def _tex_operand(f: Formula, parent: str, side: str, parent_rightmost: bool) -> str:
    rightmost = parent_rightmost if parent == "not" else (parent_rightmost and side == "right")
    match f:
        case And() | Or() | Implies():
            op = _OP_OF[type(f)]
            if parent != "not" and op == parent and side == _ASSOC_SIDE[op]:
                return tex_formula(f, rightmost)
            return f"({tex_formula(f, True)})"
        case Forall() | Exists():
            return tex_formula(f, True) if rightmost else f"({tex_formula(f, True)})"
        case RelAtom() if parent == "not":
            return f"({tex_formula(f, True)})"  # ¬(x ≥ 1), not the misleading ¬x ≥ 1
        case _:
            return tex_formula(f, rightmost)


def tex_sequent(s: Sequent) -> str:
    left = ", ".join(tex_formula(f) for f in s.left)
    right = ", ".join(tex_formula(f) for f in s.right)
    return f"{left} \\vdash {right}".strip()


def tex_command(c: Command) -> str:
    match c:
        case Skip():
            return r"\mathtt{skip}"
        case Assign(var, expr):
            return rf"{_tex_name(var)} \mathbin{{:=}} {tex_term(expr, 1)}"
        case Seq(first, second):
            return rf"{tex_command(first)} ;\; {tex_command(second)}"
        case If(cond, then, els):
            return (rf"\mathtt{{if}}\ {tex_formula(cond)}\ \mathtt{{then}}\ {tex_command(then)}"
                    rf"\ \mathtt{{else}}\ {tex_command(els)}\ \mathtt{{end}}")
        case While(cond, body):
            return rf"\mathtt{{while}}\ {tex_formula(cond)}\ \mathtt{{do}}\ {tex_command(body)}\ \mathtt{{end}}"
    raise TypeError(f"not a command: {c!r}")


def tex_triple(t: HoareTriple) -> str:
    return rf"\{{{tex_formula(t.pre)}\}}\; {tex_command(t.command)} \;\{{{tex_formula(t.post)}\}}"


def tex_goal(g: Goal) -> str:
    match g:
        case LKGoal(s):
            return tex_sequent(s)
        case HoareGoal(t):
            return tex_triple(t)
    raise TypeError(f"not a goal: {g!r}")


def to_latex(proof: ProofTree) -> str:
    """A bussproofs `prooftree` environment for the whole tree."""
    lines: list[str] = [r"\begin{prooftree}"]

    def emit(node: ProofTree):
        goal = f"\\UnaryInfC{{${tex_goal(node.goal)}$}}"
        if node.step is None:
            # an open goal: dots above its goal line, no rule label
            lines.append(r"\AxiomC{$\;\vdots\;$}")
            lines.append(goal)
            return
        n = len(node.step.children)
        if n == 0:
            lines.append(r"\AxiomC{}")
            lines.append(rf"\RightLabel{{{RULE_TEX[node.step.rule]}}}")
            lines.append(goal)
        else:
            for child in node.step.children:
                emit(child)
            lines.append(rf"\RightLabel{{{RULE_TEX[node.step.rule]}}}")
            lines.append(f"{_INF[n]}{{${tex_goal(node.goal)}$}}")

    emit(proof)
    lines.append(r"\end{prooftree}")
    return "\n".join(lines) + "\n"
