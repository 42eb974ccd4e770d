"""Independent semantic oracles the test suite checks the kernel against.

Everything here evaluates syntax directly (truth tables, integer arithmetic,
small-step command execution) and shares no code with the rule engine, the
automation or the SMT encoder.
"""

from __future__ import annotations

import itertools

from proofkit.syntax import (And, Assign, BinArith, Command, Exists, Falsity, Forall, Formula,
                             FunApp, If, Implies, IntLit, Not, Or, PredApp, RelAtom, Seq, Sequent,
                             Skip, Truth, Var, While)

_REL = {"=": lambda a, b: a == b, "<": lambda a, b: a < b, "<=": lambda a, b: a <= b,
        ">": lambda a, b: a > b, ">=": lambda a, b: a >= b}
_ARITH = {"+": lambda a, b: a + b, "-": lambda a, b: a - b, "*": lambda a, b: a * b}


def atoms_of(x) -> set[str]:
    """All 0-ary predicate names in a formula or sequent."""
    match x:
        case Sequent(left, right):
            out: set[str] = set()
            for f in left + right:
                out |= atoms_of(f)
            return out
        case PredApp(name, args):
            return {name} if not args else set()
        case Not(b):
            return atoms_of(b)
        case And(l, r) | Or(l, r) | Implies(l, r):
            return atoms_of(l) | atoms_of(r)
        case Forall(_, b) | Exists(_, b):
            return atoms_of(b)
        case _:
            return set()


def eval_term(t, ints: dict[str, int]) -> int:
    match t:
        case Var(name):
            return ints[name]
        case IntLit(value):
            return value
        case BinArith(op, l, r):
            return _ARITH[op](eval_term(l, ints), eval_term(r, ints))
        case FunApp(name, _):
            raise ValueError(f"uninterpreted function {name} has no oracle value")
    raise TypeError(f"not a term: {t!r}")


def eval_formula(f: Formula, bools: dict[str, bool], ints: dict[str, int] | None = None) -> bool:
    ints = ints or {}
    match f:
        case PredApp(name, args):
            if args:
                raise ValueError(f"uninterpreted predicate {name} has no oracle value")
            return bools.get(name, False)  # absent atom = solver don't-care
        case RelAtom(op, l, r):
            return _REL[op](eval_term(l, ints), eval_term(r, ints))
        case Truth():
            return True
        case Falsity():
            return False
        case Not(b):
            return not eval_formula(b, bools, ints)
        case And(l, r):
            return eval_formula(l, bools, ints) and eval_formula(r, bools, ints)
        case Or(l, r):
            return eval_formula(l, bools, ints) or eval_formula(r, bools, ints)
        case Implies(l, r):
            return (not eval_formula(l, bools, ints)) or eval_formula(r, bools, ints)
    raise TypeError(f"no oracle evaluation for {f!r}")


def holds_sequent(s: Sequent, bools: dict[str, bool], ints: dict[str, int] | None = None) -> bool:
    """⋀Γ → ⋁Δ under the assignment."""
    if not all(eval_formula(f, bools, ints) for f in s.left):
        return True
    return any(eval_formula(f, bools, ints) for f in s.right)


def truth_table_valid(s: Sequent) -> bool:
    names = sorted(atoms_of(s))
    for values in itertools.product((False, True), repeat=len(names)):
        if not holds_sequent(s, dict(zip(names, values))):
            return False
    return True


def falsified_by(s: Sequent, bools: dict[str, bool]) -> bool:
    """A countermodel must make every antecedent true and every succedent false."""
    return (all(eval_formula(f, bools) for f in s.left)
            and not any(eval_formula(f, bools) for f in s.right))


class OutOfFuel(Exception):
    pass


def exec_command(c: Command, state: dict[str, int], fuel: int = 10_000) -> dict[str, int]:
    """Big-step execution over integer states; raises OutOfFuel on divergence."""
    state = dict(state)

    def go(cmd: Command, fuel: int) -> int:
        nonlocal state
        if fuel <= 0:
            raise OutOfFuel()
        match cmd:
            case Skip():
                return fuel - 1
            case Assign(var, expr):
                state[var] = eval_term(expr, state)
                return fuel - 1
            case Seq(first, second):
                return go(second, go(first, fuel))
            case If(cond, then, els):
                branch = then if eval_formula(cond, {}, state) else els
                return go(branch, fuel - 1)
            case While(cond, body):
                while eval_formula(cond, {}, state):
                    fuel = go(body, fuel - 1)
                return fuel - 1
        raise TypeError(f"not a command: {cmd!r}")

    go(c, fuel)
    return state
