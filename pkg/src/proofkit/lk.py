"""The LK rule set: validated application producing premises, and
applicable-rule filtering for automation mode.

Premises read upward, multiset-style. Subformulas staying on the principal's
side replace it at its index; formulas crossing the turnstile are appended at
the end of the other side. Quantifier rules consume the principal formula:
use contraction first to keep a copy.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .errors import (AmbiguousPrincipal, EigenvariableViolation, NoPrincipal, SchemaMismatch)
from .pretty import pp_sequent
from .syntax import (And, Exists, Falsity, Forall, Formula, IDENT_RE, Implies, Not, Or, Sequent,
                     Term, Truth, Var, alpha_eq, free_vars, free_vars_sequent, signatures,
                     substitute)


class LKRule(enum.Enum):
    Id = "Id"
    Cut = "Cut"
    AndL = "AndL"
    AndR = "AndR"
    OrL = "OrL"
    OrR = "OrR"
    ImpL = "ImpL"
    ImpR = "ImpR"
    NotL = "NotL"
    NotR = "NotR"
    ForallL = "ForallL"
    ForallR = "ForallR"
    ExistsL = "ExistsL"
    ExistsR = "ExistsR"
    WeakL = "WeakL"
    WeakR = "WeakR"
    ContrL = "ContrL"
    ContrR = "ContrR"
    TruthR = "TruthR"
    FalsityL = "FalsityL"
    Z3Axiom = "Z3Axiom"


LK_LABELS = {
    LKRule.Id: "Id", LKRule.Cut: "Cut",
    LKRule.AndL: "∧L", LKRule.AndR: "∧R",
    LKRule.OrL: "∨L", LKRule.OrR: "∨R",
    LKRule.ImpL: "⇒L", LKRule.ImpR: "⇒R",
    LKRule.NotL: "¬L", LKRule.NotR: "¬R",
    LKRule.ForallL: "∀L", LKRule.ForallR: "∀R",
    LKRule.ExistsL: "∃L", LKRule.ExistsR: "∃R",
    LKRule.WeakL: "WL", LKRule.WeakR: "WR",
    LKRule.ContrL: "CL", LKRule.ContrR: "CR",
    LKRule.TruthR: "⊤R", LKRule.FalsityL: "⊥L",
    LKRule.Z3Axiom: "Z3",
}


@dataclass(frozen=True)
class RuleArgs:
    principal: Optional[tuple[str, int]] = None  # (side, index), side in {left,right}
    witness_term: Optional[Term] = None          # ForallL, ExistsR
    fresh_var: Optional[str] = None              # ForallR, ExistsL
    cut_formula: Optional[Formula] = None        # Cut


NO_ARGS = RuleArgs()

# which connective each positional rule decomposes, and on which side
_PRINCIPAL = {
    LKRule.AndL: ("left", And), LKRule.AndR: ("right", And),
    LKRule.OrL: ("left", Or), LKRule.OrR: ("right", Or),
    LKRule.ImpL: ("left", Implies), LKRule.ImpR: ("right", Implies),
    LKRule.NotL: ("left", Not), LKRule.NotR: ("right", Not),
    LKRule.ForallL: ("left", Forall), LKRule.ForallR: ("right", Forall),
    LKRule.ExistsL: ("left", Exists), LKRule.ExistsR: ("right", Exists),
    LKRule.WeakL: ("left", None), LKRule.WeakR: ("right", None),
    LKRule.ContrL: ("left", None), LKRule.ContrR: ("right", None),
}

# extra argument each rule's schema demands, for prompts and validation
RULE_NEEDS = {
    LKRule.ForallR: ("freshVar",), LKRule.ExistsL: ("freshVar",),
    LKRule.ForallL: ("witnessTerm",), LKRule.ExistsR: ("witnessTerm",),
    LKRule.Cut: ("cutFormula",),
}


@dataclass(frozen=True)
class RuleApplication:
    """A validated LK step. Construction re-runs the full check, so an
    ill-formed application cannot exist."""

    rule: LKRule
    args: RuleArgs
    conclusion: Sequent
    premises: tuple[Sequent, ...]

    def __post_init__(self):
        recomputed = compute_premises(self.conclusion, self.rule, self.args)
        if recomputed != self.premises:
            raise SchemaMismatch(
                f"premises of {self.rule.value} do not match its conclusion")


def apply_lk(goal: Sequent, rule: LKRule, args: RuleArgs = NO_ARGS) -> RuleApplication:
    return RuleApplication(rule, args, goal, compute_premises(goal, rule, args))


def candidates(goal: Sequent, rule: LKRule) -> tuple[tuple[str, int], ...]:
    """All (side, index) positions the rule could take as principal."""
    if rule not in _PRINCIPAL:
        return ()
    side, shape = _PRINCIPAL[rule]
    row = goal.left if side == "left" else goal.right
    return tuple((side, i) for i, f in enumerate(row)
                 if shape is None or isinstance(f, shape))


def _check_schema(rule: LKRule, args: RuleArgs):
    allowed = set(RULE_NEEDS.get(rule, ()))
    if rule in _PRINCIPAL:
        allowed.add("principalIndex")
    present = {
        "principalIndex": args.principal is not None,
        "witnessTerm": args.witness_term is not None,
        "freshVar": args.fresh_var is not None,
        "cutFormula": args.cut_formula is not None,
    }
    for field_name, given in present.items():
        if given and field_name not in allowed:
            raise SchemaMismatch(f"{rule.value} does not take {field_name}")
    for field_name in RULE_NEEDS.get(rule, ()):
        if not present[field_name]:
            raise SchemaMismatch(f"{rule.value} requires {field_name}")


def _resolve_principal(goal: Sequent, rule: LKRule, args: RuleArgs) -> int:
    side, shape = _PRINCIPAL[rule]
    cands = candidates(goal, rule)
    if args.principal is not None:
        p_side, p_index = args.principal
        if p_side != side:
            raise SchemaMismatch(
                f"{rule.value} works on the {side} side, principal given on the {p_side}")
        if (side, p_index) not in cands:
            what = shape.__name__ if shape is not None else "formula"
            raise NoPrincipal(
                f"no matching {what} at {side} position {p_index}")
        return p_index
    if not cands:
        raise NoPrincipal(f"{rule.value} has no principal formula in {pp_sequent(goal)}")
    if len(cands) > 1:
        raise AmbiguousPrincipal(
            f"{rule.value} could apply at {side} positions "
            + ", ".join(str(i) for _, i in cands), cands)
    return cands[0][1]


def _replace(row: tuple[Formula, ...], i: int, *new: Formula) -> tuple[Formula, ...]:
    return row[:i] + new + row[i + 1:]


def _check_eigenvariable(goal: Sequent, name: str):
    if not IDENT_RE.match(name):
        raise SchemaMismatch(f"{name!r} is not a valid variable name")
    if name in free_vars_sequent(goal):
        raise EigenvariableViolation(
            f"{name} occurs free in the conclusion {pp_sequent(goal)}")
    sigs = signatures(goal).get(name, set())
    if any(kind != "var" for kind, _ in sigs):
        raise EigenvariableViolation(
            f"{name} already names a predicate or function in the conclusion")


def compute_premises(goal: Sequent, rule: LKRule, args: RuleArgs) -> tuple[Sequent, ...]:
    _check_schema(rule, args)
    left, right = goal.left, goal.right

    if rule is LKRule.Z3Axiom:
        raise SchemaMismatch("Z3Axiom is discharged through the solver bridge, not applyLK")

    if rule is LKRule.Id:
        if any(alpha_eq(a, b) for a in left for b in right):
            return ()
        raise NoPrincipal(f"no formula occurs on both sides of {pp_sequent(goal)}")

    if rule is LKRule.TruthR:
        if any(isinstance(f, Truth) for f in right):
            return ()
        raise NoPrincipal("no ⊤ on the right side")

    if rule is LKRule.FalsityL:
        if any(isinstance(f, Falsity) for f in left):
            return ()
        raise NoPrincipal("no ⊥ on the left side")

    if rule is LKRule.Cut:
        c = args.cut_formula
        return (Sequent(left, right + (c,)), Sequent(left + (c,), right))

    i = _resolve_principal(goal, rule, args)

    match rule:
        case LKRule.AndL:
            f = left[i]
            return (Sequent(_replace(left, i, f.left, f.right), right),)
        case LKRule.AndR:
            f = right[i]
            return (Sequent(left, _replace(right, i, f.left)),
                    Sequent(left, _replace(right, i, f.right)))
        case LKRule.OrL:
            f = left[i]
            return (Sequent(_replace(left, i, f.left), right),
                    Sequent(_replace(left, i, f.right), right))
        case LKRule.OrR:
            f = right[i]
            return (Sequent(left, _replace(right, i, f.left, f.right)),)
        case LKRule.ImpL:
            f = left[i]
            return (Sequent(_replace(left, i), right + (f.left,)),
                    Sequent(_replace(left, i, f.right), right))
        case LKRule.ImpR:
            f = right[i]
            return (Sequent(left + (f.left,), _replace(right, i, f.right)),)
        case LKRule.NotL:
            f = left[i]
            return (Sequent(_replace(left, i), right + (f.body,)),)
        case LKRule.NotR:
            f = right[i]
            return (Sequent(left + (f.body,), _replace(right, i)),)
        case LKRule.ForallR:
            f = right[i]
            _check_eigenvariable(goal, args.fresh_var)
            body = substitute(f.body, f.var, Var(args.fresh_var))
            return (Sequent(left, _replace(right, i, body)),)
        case LKRule.ExistsL:
            f = left[i]
            _check_eigenvariable(goal, args.fresh_var)
            body = substitute(f.body, f.var, Var(args.fresh_var))
            return (Sequent(_replace(left, i, body), right),)
        case LKRule.ForallL:
            f = left[i]
            body = substitute(f.body, f.var, args.witness_term)
            return (Sequent(_replace(left, i, body), right),)
        case LKRule.ExistsR:
            f = right[i]
            body = substitute(f.body, f.var, args.witness_term)
            return (Sequent(left, _replace(right, i, body)),)
        case LKRule.WeakL:
            return (Sequent(_replace(left, i), right),)
        case LKRule.WeakR:
            return (Sequent(left, _replace(right, i)),)
        case LKRule.ContrL:
            return (Sequent(left[:i + 1] + (left[i],) + left[i + 1:], right),)
        case LKRule.ContrR:
            return (Sequent(left, right[:i + 1] + (right[i],) + right[i + 1:]),)
    raise SchemaMismatch(f"unhandled rule {rule.value}")


def applicable_lk(goal: Sequent) -> list[tuple[LKRule, tuple[tuple[str, int], ...]]]:
    """Rules the automation-mode menu offers for this sequent, with all
    candidate principal positions."""
    out: list[tuple[LKRule, tuple[tuple[str, int], ...]]] = []
    for rule in LKRule:
        if rule is LKRule.Id:
            if any(alpha_eq(a, b) for a in goal.left for b in goal.right):
                out.append((rule, ()))
        elif rule is LKRule.Cut or rule is LKRule.Z3Axiom:
            out.append((rule, ()))
        elif rule is LKRule.TruthR:
            if any(isinstance(f, Truth) for f in goal.right):
                out.append((rule, ()))
        elif rule is LKRule.FalsityL:
            if any(isinstance(f, Falsity) for f in goal.left):
                out.append((rule, ()))
        else:
            cands = candidates(goal, rule)
            if cands:
                out.append((rule, cands))
    return out
