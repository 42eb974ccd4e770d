"""Replay-validated save/load.

A saved proof is not a tree snapshot but the ordered list of rule
applications that rebuild it. Loading reparses the goal and replays every
step through the rule constructors, so a tampered file either still replays
to a valid tree or is rejected — it can never smuggle in an unchecked step.
Solver closures are re-marked as pseudo-axioms without re-solving unless
recheck_z3 is set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Union

from . import smt
from .errors import MalformedFile, ProofError, ReplayError, VersionUnsupported
from .hoare import HoareArgs, HoareRule
from .lk import LKRule, RuleArgs
from .parser import ParseError, parse_formula, parse_hoare_triple, parse_sequent, parse_term
from .pretty import pp_formula, pp_goal, pp_term
from .syntax import HoareGoal, LKGoal
from .tree import (NodePath, ProofTree, apply_at, close_z3_at, hole, nodes, set_hidden)

FILE_VERSION = 1
FILE_EXTENSION = ".ptb.json"


@dataclass(frozen=True)
class ProofStep:
    path: NodePath
    rule: str
    args: dict


@dataclass(frozen=True)
class ProofScript:
    version: int
    goal_kind: str  # "lk" | "hoare"
    goal_text: str
    steps: tuple[ProofStep, ...]
    hidden_paths: tuple[NodePath, ...]


def _serialize_args(args: Union[RuleArgs, HoareArgs]) -> dict:
    out: dict = {}
    if isinstance(args, RuleArgs):
        if args.principal is not None:
            out["principal"] = {"side": args.principal[0], "index": args.principal[1]}
        if args.fresh_var is not None:
            out["freshVar"] = args.fresh_var
        if args.witness_term is not None:
            out["witnessTerm"] = pp_term(args.witness_term)
        if args.cut_formula is not None:
            out["cutFormula"] = pp_formula(args.cut_formula)
    else:
        if args.mid_condition is not None:
            out["midCondition"] = pp_formula(args.mid_condition)
        if args.strengthened_pre is not None:
            out["strengthenedPre"] = pp_formula(args.strengthened_pre)
        if args.weakened_post is not None:
            out["weakenedPost"] = pp_formula(args.weakened_post)
    return out


_LK_NAMES = {r.value: r for r in LKRule}
_HOARE_NAMES = {r.value: r for r in HoareRule}


def _parse_args(rule_name: str, raw: dict) -> Union[RuleArgs, HoareArgs]:
    if not isinstance(raw, dict):
        raise MalformedFile("step args must be an object")
    if rule_name in _LK_NAMES:
        principal = None
        if "principal" in raw:
            p = raw["principal"]
            if (not isinstance(p, dict) or p.get("side") not in ("left", "right")
                    or not isinstance(p.get("index"), int)):
                raise MalformedFile("malformed principal position")
            principal = (p["side"], p["index"])
        return RuleArgs(
            principal=principal,
            fresh_var=_opt_str(raw, "freshVar"),
            witness_term=parse_term(raw["witnessTerm"]) if "witnessTerm" in raw else None,
            cut_formula=parse_formula(raw["cutFormula"]) if "cutFormula" in raw else None,
        )
    if rule_name in _HOARE_NAMES:
        return HoareArgs(
            mid_condition=parse_formula(raw["midCondition"]) if "midCondition" in raw else None,
            strengthened_pre=parse_formula(raw["strengthenedPre"]) if "strengthenedPre" in raw else None,
            weakened_post=parse_formula(raw["weakenedPost"]) if "weakenedPost" in raw else None,
        )
    raise MalformedFile(f"unknown rule name {rule_name!r}")


def _opt_str(raw: dict, key: str) -> Optional[str]:
    if key not in raw:
        return None
    val = raw[key]
    if not isinstance(val, str):
        raise MalformedFile(f"{key} must be a string")
    return val


def save_proof(proof: ProofTree) -> ProofScript:
    """Record the steps in rebuild (pre-order) order."""
    steps = []
    hidden = []
    for path, node in nodes(proof):
        if node.hidden:
            hidden.append(path)
        if node.step is not None:
            steps.append(ProofStep(path, node.step.rule.value,
                                   _serialize_args(node.step.args)))
    kind = "lk" if isinstance(proof.goal, LKGoal) else "hoare"
    return ProofScript(FILE_VERSION, kind, pp_goal(proof.goal),
                       tuple(steps), tuple(hidden))


def serialize(script: ProofScript) -> bytes:
    doc = {
        "version": script.version,
        "goalKind": script.goal_kind,
        "goalText": script.goal_text,
        "steps": [{"path": list(s.path), "rule": s.rule, "args": s.args}
                  for s in script.steps],
        "hiddenPaths": [list(p) for p in script.hidden_paths],
    }
    return (json.dumps(doc, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def _expect_path(raw, what: str) -> NodePath:
    if not (isinstance(raw, list) and all(isinstance(i, int) and i >= 0 for i in raw)):
        raise MalformedFile(f"{what} must be a list of non-negative integers")
    return tuple(raw)


def deserialize(data: Union[bytes, str]) -> ProofScript:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise MalformedFile(f"not UTF-8: {e}") from e
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise MalformedFile(f"not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise MalformedFile("top level must be an object")
    version = doc.get("version")
    if not isinstance(version, int):
        raise MalformedFile("missing integer version")
    if version != FILE_VERSION:
        raise VersionUnsupported(f"file version {version} is not supported")
    kind = doc.get("goalKind")
    if kind not in ("lk", "hoare"):
        raise MalformedFile("goalKind must be 'lk' or 'hoare'")
    text = doc.get("goalText")
    if not isinstance(text, str):
        raise MalformedFile("missing goalText")
    raw_steps = doc.get("steps")
    if not isinstance(raw_steps, list):
        raise MalformedFile("steps must be a list")
    steps = []
    for raw in raw_steps:
        if not isinstance(raw, dict) or not isinstance(raw.get("rule"), str):
            raise MalformedFile("each step needs a path, a rule name and args")
        steps.append(ProofStep(_expect_path(raw.get("path"), "step path"),
                               raw["rule"], raw.get("args", {})))
    raw_hidden = doc.get("hiddenPaths", [])
    if not isinstance(raw_hidden, list):
        raise MalformedFile("hiddenPaths must be a list")
    hidden = tuple(_expect_path(p, "hidden path") for p in raw_hidden)
    return ProofScript(version, kind, text, tuple(steps), hidden)


def replay(script: ProofScript, recheck_z3: bool = False,
           solver: Union[str, list[str], None] = None,
           timeout: float = smt.DEFAULT_TIMEOUT) -> ProofTree:
    """Rebuild the tree, re-running every constructor check."""
    if script.goal_kind == "lk":
        goal = LKGoal(parse_sequent(script.goal_text))
    else:
        goal = HoareGoal(parse_hoare_triple(script.goal_text))
    proof = hole(goal)
    for index, step in enumerate(script.steps):
        try:
            if step.rule == LKRule.Z3Axiom.value:
                if recheck_z3:
                    proof, verdict = smt.apply_z3_axiom(proof, step.path, timeout, solver)
                    if not isinstance(verdict, smt.Valid):
                        raise MalformedFile(
                            f"solver no longer confirms the goal: {verdict}")
                else:
                    proof = close_z3_at(proof, step.path)
            else:
                rule = _LK_NAMES.get(step.rule) or _HOARE_NAMES.get(step.rule)
                if rule is None:
                    raise MalformedFile(f"unknown rule name {step.rule!r}")
                proof = apply_at(proof, step.path, rule, _parse_args(step.rule, step.args))
        except (ProofError, ParseError) as e:
            raise ReplayError(index, e) from e
    for path in script.hidden_paths:
        try:
            proof = set_hidden(proof, path, True)
        except ProofError as e:
            raise MalformedFile(f"hiddenPaths entry {list(path)} is invalid: {e}") from e
    return proof


def load_proof(data: Union[bytes, str], recheck_z3: bool = False,
               solver: Union[str, list[str], None] = None,
               timeout: float = smt.DEFAULT_TIMEOUT) -> ProofTree:
    return replay(deserialize(data), recheck_z3=recheck_z3, solver=solver, timeout=timeout)
