import random
import re
from pathlib import Path

import pytest

from genlib import grow_random_tree
from trees import consequence_pipeline_start, walkthrough_tree
from proofkit.latex import to_latex
from proofkit.lk import LKRule, NO_ARGS, RuleArgs
from proofkit.parser import parse_hoare_triple, parse_sequent, parse_term
from proofkit.syntax import HoareGoal, LKGoal
from proofkit.tree import apply_at, close_z3_at, hole

GOLDEN = Path(__file__).parent / "golden"


def golden_trees():
    quant = hole(LKGoal(parse_sequent("forall x. P(x) |- exists y. P(y)")))
    quant = apply_at(quant, (), LKRule.ForallL, RuleArgs(witness_term=parse_term("a")))
    quant = apply_at(quant, (0,), LKRule.ExistsR, RuleArgs(witness_term=parse_term("a")))
    quant = apply_at(quant, (0, 0), LKRule.Id, NO_ARGS)
    return {
        "id_leaf": apply_at(hole(LKGoal(parse_sequent("p |- p"))), (), LKRule.Id, NO_ARGS),
        "walkthrough": walkthrough_tree(),
        "while_hole": hole(HoareGoal(parse_hoare_triple(
            "{x >= 0} while x >= 1 do x := x - 1 end {x >= 0 /\\ ~(x >= 1)}"))),
        "hoare_z3": close_z3_at(consequence_pipeline_start(), (0,)),
        "quantifiers": quant,
    }


@pytest.mark.parametrize("name", ["id_leaf", "walkthrough", "while_hole",
                                  "hoare_z3", "quantifiers"])
def test_golden_byte_exact(name):
    rendered = to_latex(golden_trees()[name])
    assert rendered == (GOLDEN / f"{name}.tex").read_text(encoding="utf-8")


def test_spec_id_example_shape():
    rendered = to_latex(golden_trees()["id_leaf"])
    squashed = rendered.replace("\n", "")
    assert (r"\begin{prooftree}\AxiomC{}\RightLabel{\textsc{Id}}"
            r"\UnaryInfC{$p \vdash p$}\end{prooftree}") == squashed


def test_walkthrough_has_five_inferences_two_ids():
    rendered = to_latex(walkthrough_tree())
    assert rendered.count(r"\RightLabel") == 5
    assert rendered.count(r"\textsc{Id}") == 2


def test_hole_renders_dots_over_goal():
    rendered = to_latex(hole(LKGoal(parse_sequent("|- p"))))
    assert r"\AxiomC{$\;\vdots\;$}" in rendered
    assert rendered.index(r"\vdots") < rendered.index(r"\vdash p")


def test_determinism():
    t = walkthrough_tree()
    assert to_latex(t) == to_latex(t)


_POP = {r"\UnaryInfC": 1, r"\BinaryInfC": 2, r"\TrinaryInfC": 3}


def _check_bussproofs_stack(rendered: str):
    """Simulate the bussproofs stack discipline: the environment must leave
    exactly one finished tree."""
    lines = rendered.strip().splitlines()
    assert lines[0] == r"\begin{prooftree}" and lines[-1] == r"\end{prooftree}"
    depth = 0
    for line in lines[1:-1]:
        cmd = re.match(r"\\[A-Za-z]+", line).group(0)
        if cmd == r"\AxiomC":
            depth += 1
        elif cmd in _POP:
            assert depth >= _POP[cmd], line
            depth += 1 - _POP[cmd]
        else:
            assert cmd == r"\RightLabel", line
    assert depth == 1
    assert rendered.count("{") == rendered.count("}")
    assert rendered.count("$") % 2 == 0


def test_fuzzed_trees_are_wellformed():
    rng = random.Random(91)
    for _ in range(120):
        proof = grow_random_tree(rng, ops=8)
        _check_bussproofs_stack(to_latex(proof))
