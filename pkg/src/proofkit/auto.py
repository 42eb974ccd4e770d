"""The Auto button: deterministic, non-backtracking proof search.

At each hole it first tries the closing axioms, then walks a fixed order of
invertible-first propositional rules. A rule with several candidate principal
formulas stops the search at that hole — the choice is the user's, not ours.
Quantifier, cut and structural rules are never applied.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

from . import lk as lk_mod
from .errors import AutoCancelled, NotAHole, NotLKGoal
from .lk import LKRule, RuleArgs
from .syntax import Falsity, LKGoal, Sequent, Truth, alpha_eq
from .tree import NodePath, ProofTree, apply_at, hole, is_complete, is_hole, node_at

AUTO_ORDER = (LKRule.NotL, LKRule.NotR, LKRule.AndL, LKRule.OrR,
              LKRule.ImpR, LKRule.AndR, LKRule.OrL, LKRule.ImpL)

DEFAULT_MAX_DEPTH = 200


@dataclass(frozen=True)
class Completed:
    pass


@dataclass(frozen=True)
class Ambiguous:
    rule: LKRule
    positions: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class NoRule:
    pass


@dataclass(frozen=True)
class DepthLimit:
    pass


StuckReason = Union[Ambiguous, NoRule, DepthLimit]


@dataclass(frozen=True)
class Stuck:
    reason: StuckReason


@dataclass(frozen=True)
class AutoResult:
    tree: ProofTree
    outcome: Union[Completed, Stuck]


def _try_close(sequent: Sequent) -> Optional[LKRule]:
    if any(alpha_eq(a, b) for a in sequent.left for b in sequent.right):
        return LKRule.Id
    if any(isinstance(f, Truth) for f in sequent.right):
        return LKRule.TruthR
    if any(isinstance(f, Falsity) for f in sequent.left):
        return LKRule.FalsityL
    return None


def auto_at(tree: ProofTree, path: NodePath,
            max_depth: int = DEFAULT_MAX_DEPTH,
            should_stop: Optional[Callable[[], bool]] = None) -> AutoResult:
    """Run the search at the hole at path; each subtree is searched
    independently, so partial progress survives a stuck branch."""
    start = node_at(tree, path)
    if not is_hole(start):
        raise NotAHole(f"node at {list(path)} already carries a rule")
    if not isinstance(start.goal, LKGoal):
        raise NotLKGoal("Auto is a sequent-calculus feature")

    pending: list[NodePath] = [path]
    steps = 0
    first_reason: Optional[StuckReason] = None

    while pending:
        here = pending.pop()
        if should_stop is not None and should_stop():
            raise AutoCancelled("automation cancelled")
        if steps >= max_depth:
            if first_reason is None:
                first_reason = DepthLimit()
            break
        sequent = node_at(tree, here).goal.sequent

        closer = _try_close(sequent)
        if closer is not None:
            tree = apply_at(tree, here, closer, lk_mod.NO_ARGS)
            steps += 1
            continue

        for rule in AUTO_ORDER:
            cands = lk_mod.candidates(sequent, rule)
            if not cands:
                continue
            if len(cands) > 1:
                if first_reason is None:
                    first_reason = Ambiguous(rule, cands)
                break
            tree = apply_at(tree, here, rule, RuleArgs(principal=cands[0]))
            steps += 1
            n_children = len(node_at(tree, here).step.children)
            pending.extend(here + (i,) for i in range(n_children - 1, -1, -1))
            break
        else:
            if first_reason is None:
                first_reason = NoRule()

    if first_reason is not None:
        return AutoResult(tree, Stuck(first_reason))
    assert is_complete(node_at(tree, path))  # Completed ⇔ the target subtree closed
    return AutoResult(tree, Completed())


def auto_prove(goal: Sequent, max_depth: int = DEFAULT_MAX_DEPTH,
               should_stop: Optional[Callable[[], bool]] = None) -> AutoResult:
    return auto_at(hole(LKGoal(goal)), (), max_depth, should_stop)
