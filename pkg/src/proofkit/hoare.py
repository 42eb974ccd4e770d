"""Hoare-logic rule application. Premises are Goals: Hoare triples for the
structural rules, embedded LK sequents for the consequence rule's side
conditions.

Side conditions compare formulas up to alpha-equivalence only, never modulo
arithmetic; mismatches are meant to be routed through HConseq and the solver
pseudo-axiom.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .errors import CommandMismatch, SchemaMismatch, SideConditionFailed
from .pretty import pp_formula
from .syntax import (And, Assign, Formula, Goal, HoareGoal, HoareTriple, If, LKGoal, Not, Seq,
                     Sequent, Skip, While, alpha_eq, substitute)


class HoareRule(enum.Enum):
    HSkip = "HSkip"
    HAssign = "HAssign"
    HSeq = "HSeq"
    HIf = "HIf"
    HWhile = "HWhile"
    HConseq = "HConseq"


HOARE_LABELS = {
    HoareRule.HSkip: "Skip", HoareRule.HAssign: "Assign", HoareRule.HSeq: "Seq",
    HoareRule.HIf: "If", HoareRule.HWhile: "While", HoareRule.HConseq: "Conseq",
}

_HEAD_RULE = {Skip: HoareRule.HSkip, Assign: HoareRule.HAssign, Seq: HoareRule.HSeq,
              If: HoareRule.HIf, While: HoareRule.HWhile}

HOARE_NEEDS = {
    HoareRule.HSeq: ("midCondition",),
    HoareRule.HConseq: ("strengthenedPre", "weakenedPost"),
}


@dataclass(frozen=True)
class HoareArgs:
    mid_condition: Optional[Formula] = None     # HSeq
    strengthened_pre: Optional[Formula] = None  # HConseq
    weakened_post: Optional[Formula] = None     # HConseq


NO_HOARE_ARGS = HoareArgs()


def _check_schema(rule: HoareRule, args: HoareArgs):
    allowed = set(HOARE_NEEDS.get(rule, ()))
    present = {
        "midCondition": args.mid_condition is not None,
        "strengthenedPre": args.strengthened_pre is not None,
        "weakenedPost": args.weakened_post is not None,
    }
    for name, given in present.items():
        if given and name not in allowed:
            raise SchemaMismatch(f"{rule.value} does not take {name}")
    for name in allowed:
        if not present[name]:
            raise SchemaMismatch(f"{rule.value} requires {name}")


def apply_hoare(goal: HoareTriple, rule: HoareRule, args: HoareArgs = NO_HOARE_ARGS) -> list[Goal]:
    _check_schema(rule, args)
    pre, command, post = goal.pre, goal.command, goal.post

    if rule is not HoareRule.HConseq:
        expected = _HEAD_RULE[type(command)]
        if rule is not expected:
            raise CommandMismatch(
                f"{rule.value} does not match this command; expected {expected.value}")

    match rule:
        case HoareRule.HSkip:
            if not alpha_eq(pre, post):
                raise SideConditionFailed(
                    f"skip needs equal pre- and postconditions: "
                    f"{pp_formula(pre)} vs {pp_formula(post)}")
            return []
        case HoareRule.HAssign:
            required = substitute(post, command.var, command.expr)
            if not alpha_eq(pre, required):
                raise SideConditionFailed(
                    f"assignment precondition must be {pp_formula(required)}, "
                    f"found {pp_formula(pre)}")
            return []
        case HoareRule.HSeq:
            mid = args.mid_condition
            return [HoareGoal(HoareTriple(pre, command.first, mid)),
                    HoareGoal(HoareTriple(mid, command.second, post))]
        case HoareRule.HIf:
            cond = command.cond
            return [HoareGoal(HoareTriple(And(pre, cond), command.then, post)),
                    HoareGoal(HoareTriple(And(pre, Not(cond)), command.els, post))]
        case HoareRule.HWhile:
            # conclusion must be in invariant-normal form: {I} while b {I ∧ ¬b}
            invariant, cond = pre, command.cond
            required = And(invariant, Not(cond))
            if not alpha_eq(post, required):
                raise SideConditionFailed(
                    f"loop postcondition must be {pp_formula(required)}, "
                    f"found {pp_formula(post)}; reach this form with Conseq")
            return [HoareGoal(HoareTriple(And(invariant, cond), command.body, invariant))]
        case HoareRule.HConseq:
            p2, q2 = args.strengthened_pre, args.weakened_post
            return [LKGoal(Sequent((pre,), (p2,))),
                    HoareGoal(HoareTriple(p2, command, q2)),
                    LKGoal(Sequent((q2,), (post,)))]
    raise SchemaMismatch(f"unhandled rule {rule.value}")


def applicable_hoare(goal: HoareTriple) -> list[HoareRule]:
    """The rule matching the command head, plus consequence."""
    return [_HEAD_RULE[type(goal.command)], HoareRule.HConseq]
