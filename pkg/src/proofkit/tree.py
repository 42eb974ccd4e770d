"""Proof trees with holes and the surgery behind the ⊕ / − / detach / hide
buttons.

Trees are persistent: every operation returns a new tree and leaves the
input untouched, which makes undo and detaching pure functions. A node is a
hole (no step), closed (a step with zero premises) or derived (a step with
child subtrees whose goals are exactly the rule's premises).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Iterator, Optional, Union

from . import hoare as hoare_mod
from . import lk as lk_mod
from .errors import (AlreadyHole, CannotDetachRoot, GoalMismatch, InvalidPath, InvalidTree,
                     NotAHole, NotLKGoal, SchemaMismatch)
from .hoare import HoareArgs, HoareRule
from .lk import LKRule, RuleArgs
from .pretty import pp_goal
from .syntax import Goal, HoareGoal, LKGoal, alpha_eq_goal

NodePath = tuple[int, ...]
Rule = Union[LKRule, HoareRule]
Args = Union[RuleArgs, HoareArgs]


@dataclass(frozen=True)
class RuleStep:
    rule: Rule
    args: Args
    children: tuple[ProofTree, ...]


@dataclass(frozen=True)
class ProofTree:
    goal: Goal
    node_id: int
    step: Optional[RuleStep] = None  # None = hole
    hidden: bool = False


def hole(goal: Goal, node_id: int = 0) -> ProofTree:
    return ProofTree(goal, node_id)


def is_hole(node: ProofTree) -> bool:
    return node.step is None


def is_closed(node: ProofTree) -> bool:
    return node.step is not None and not node.step.children


def node_at(tree: ProofTree, path: NodePath) -> ProofTree:
    node = tree
    for i in path:
        if node.step is None or not 0 <= i < len(node.step.children):
            raise InvalidPath(f"no node at path {list(path)}")
        node = node.step.children[i]
    return node


def nodes(tree: ProofTree) -> Iterator[tuple[NodePath, ProofTree]]:
    """Pre-order traversal, children left to right."""
    stack: list[tuple[NodePath, ProofTree]] = [((), tree)]
    while stack:
        path, node = stack.pop()
        yield path, node
        if node.step is not None:
            for i in range(len(node.step.children) - 1, -1, -1):
                stack.append((path + (i,), node.step.children[i]))


def holes(tree: ProofTree) -> list[tuple[NodePath, Goal]]:
    return [(path, node.goal) for path, node in nodes(tree) if is_hole(node)]


def is_complete(tree: ProofTree) -> bool:
    return all(not is_hole(node) for _, node in nodes(tree))


def max_id(tree: ProofTree) -> int:
    return max(node.node_id for _, node in nodes(tree))


def _rebuild(node: ProofTree, path: NodePath,
             make: Callable[[ProofTree], ProofTree]) -> ProofTree:
    if not path:
        return make(node)
    if node.step is None or not 0 <= path[0] < len(node.step.children):
        raise InvalidPath(f"no node at path {list(path)}")
    kids = node.step.children
    i = path[0]
    new_child = _rebuild(kids[i], path[1:], make)
    return replace(node, step=replace(node.step, children=kids[:i] + (new_child,) + kids[i + 1:]))


def premises_for(goal: Goal, rule: Rule, args: Args) -> list[Goal]:
    """Dispatch to the calculus matching the goal; validates as it computes."""
    match goal, rule:
        case LKGoal(sequent), LKRule():
            if not isinstance(args, RuleArgs):
                raise SchemaMismatch(f"{rule.value} takes sequent-calculus arguments")
            app = lk_mod.apply_lk(sequent, rule, args)
            return [LKGoal(s) for s in app.premises]
        case HoareGoal(triple), HoareRule():
            if not isinstance(args, HoareArgs):
                raise SchemaMismatch(f"{rule.value} takes Hoare-rule arguments")
            return hoare_mod.apply_hoare(triple, rule, args)
        case LKGoal(_), HoareRule():
            raise SchemaMismatch(f"{rule.value} is a Hoare rule; this goal is a sequent")
        case HoareGoal(_), LKRule():
            raise SchemaMismatch(f"{rule.value} is a sequent rule; this goal is a Hoare triple")
    raise SchemaMismatch(f"cannot apply {rule!r}")


def apply_at(tree: ProofTree, path: NodePath, rule: Rule, args: Args) -> ProofTree:
    """Turn the hole at path into a validated step with child holes."""
    node = node_at(tree, path)
    if not is_hole(node):
        raise NotAHole(f"node at {list(path)} already carries a rule")
    premises = premises_for(node.goal, rule, args)
    base = max_id(tree) + 1
    children = tuple(hole(g, base + i) for i, g in enumerate(premises))
    return _rebuild(tree, path,
                    lambda n: replace(n, step=RuleStep(rule, args, children)))


def close_z3_at(tree: ProofTree, path: NodePath) -> ProofTree:
    """Mark the hole at path closed by the solver pseudo-axiom. Callers are
    responsible for having obtained a Valid verdict (smt bridge / replay)."""
    node = node_at(tree, path)
    if not is_hole(node):
        raise NotAHole(f"node at {list(path)} already carries a rule")
    if not isinstance(node.goal, LKGoal):
        raise NotLKGoal("the solver pseudo-axiom applies to sequent goals only")
    step = RuleStep(LKRule.Z3Axiom, lk_mod.NO_ARGS, ())
    return _rebuild(tree, path, lambda n: replace(n, step=step))


def prune_at(tree: ProofTree, path: NodePath) -> ProofTree:
    """Unapply the rule at path and everything above it."""
    node = node_at(tree, path)
    if is_hole(node):
        raise AlreadyHole(f"node at {list(path)} is already a hole")
    return _rebuild(tree, path, lambda n: replace(n, step=None))


def detach_at(tree: ProofTree, path: NodePath) -> tuple[ProofTree, ProofTree]:
    """Split off the subtree at path as an independent proof; the original
    position becomes a hole."""
    if not path:
        raise CannotDetachRoot("cannot detach the root of a proof")
    node = node_at(tree, path)
    if is_hole(node):
        raise AlreadyHole(f"node at {list(path)} is already a hole")
    remainder = _rebuild(tree, path, lambda n: replace(n, step=None))
    return remainder, node


def _renumber(node: ProofTree, next_id: int) -> tuple[ProofTree, int]:
    my_id = next_id
    next_id += 1
    if node.step is None:
        return replace(node, node_id=my_id), next_id
    kids = []
    for child in node.step.children:
        new_child, next_id = _renumber(child, next_id)
        kids.append(new_child)
    return replace(node, node_id=my_id,
                   step=replace(node.step, children=tuple(kids))), next_id


def attach_at(tree: ProofTree, path: NodePath, sub: ProofTree) -> ProofTree:
    """Graft a detached proof onto a hole with the same (alpha-equal) goal.
    Fresh node ids are minted for the grafted subtree."""
    node = node_at(tree, path)
    if not is_hole(node):
        raise NotAHole(f"node at {list(path)} already carries a rule")
    if not alpha_eq_goal(sub.goal, node.goal):
        raise GoalMismatch(
            f"cannot attach a proof of {pp_goal(sub.goal)} onto the hole {pp_goal(node.goal)}")
    renumbered, _ = _renumber(sub, max_id(tree) + 1)
    return _rebuild(tree, path, lambda n: renumbered)


def set_hidden(tree: ProofTree, path: NodePath, flag: bool) -> ProofTree:
    node_at(tree, path)  # path check
    return _rebuild(tree, path, lambda n: replace(n, hidden=flag))


def revalidate(tree: ProofTree):
    """Recompute every step's premises from (goal, rule, args) and demand the
    children's goals match exactly; check node-id uniqueness. Raises
    InvalidTree on any mismatch. Z3 pseudo-axiom closures are checked for
    shape only (re-solving is persist's --recheck-z3 concern)."""
    seen_ids: set[int] = set()
    for path, node in nodes(tree):
        if node.node_id in seen_ids:
            raise InvalidTree(f"duplicate node id {node.node_id}")
        seen_ids.add(node.node_id)
        if node.step is None:
            continue
        rule, args = node.step.rule, node.step.args
        if rule is LKRule.Z3Axiom:
            if node.step.children or not isinstance(node.goal, LKGoal):
                raise InvalidTree(f"malformed pseudo-axiom closure at {list(path)}")
            continue
        try:
            premises = premises_for(node.goal, rule, args)
        except Exception as e:
            raise InvalidTree(f"step at {list(path)} does not validate: {e}") from e
        child_goals = [c.goal for c in node.step.children]
        if child_goals != premises:
            raise InvalidTree(
                f"children at {list(path)} do not match the premises of {rule.value}")


def trees_equal(a: ProofTree, b: ProofTree) -> bool:
    """Structural equality including hidden flags, ignoring node ids."""
    if a.goal != b.goal or a.hidden != b.hidden:
        return False
    if (a.step is None) != (b.step is None):
        return False
    if a.step is None:
        return True
    if a.step.rule != b.step.rule or a.step.args != b.step.args:
        return False
    if len(a.step.children) != len(b.step.children):
        return False
    return all(trees_equal(x, y) for x, y in zip(a.step.children, b.step.children))
