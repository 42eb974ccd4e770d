import itertools
import random

import pytest

from genlib import gen_prop_sequent
from oracles import atoms_of, holds_sequent
from proofkit.errors import (AmbiguousPrincipal, EigenvariableViolation, NoPrincipal,
                             SchemaMismatch)
from proofkit.lk import (LKRule, NO_ARGS, RuleApplication, RuleArgs, applicable_lk, apply_lk,
                         compute_premises)
from proofkit.parser import parse_formula, parse_sequent, parse_term
from proofkit.syntax import Sequent, free_vars_sequent

S = parse_sequent


def rules_of(listing):
    return {rule for rule, _ in listing}


def test_imp_right_walkthrough_step():
    app = apply_lk(S("|- p => q => (p /\\ q)"), LKRule.ImpR,
                   RuleArgs(principal=("right", 0)))
    assert app.premises == (S("p |- q => (p /\\ q)"),)


def test_and_right_two_premises():
    app = apply_lk(S("p, q |- p /\\ q"), LKRule.AndR, RuleArgs(principal=("right", 0)))
    assert app.premises == (S("p, q |- p"), S("p, q |- q"))


def test_exists_left_fresh_variable():
    app = apply_lk(S("exists x. P(x) |- q"), LKRule.ExistsL, RuleArgs(fresh_var="y"))
    assert app.premises == (S("P(y) |- q"),)


def test_exists_left_eigenvariable_violation():
    with pytest.raises(EigenvariableViolation):
        apply_lk(S("exists x. P(x) |- P(x)"), LKRule.ExistsL, RuleArgs(fresh_var="x"))


def test_eigenvariable_must_not_be_a_symbol():
    with pytest.raises(EigenvariableViolation):
        apply_lk(S("exists x. P(x) |- q"), LKRule.ExistsL, RuleArgs(fresh_var="q"))


def test_id_closes():
    assert apply_lk(S("p |- p"), LKRule.Id, NO_ARGS).premises == ()


def test_id_allows_side_formulas():
    assert apply_lk(S("p, q |- p"), LKRule.Id, NO_ARGS).premises == ()


def test_id_up_to_alpha():
    assert apply_lk(S("forall x. P(x) |- forall y. P(y)"), LKRule.Id, NO_ARGS).premises == ()


def test_id_requires_a_pair():
    with pytest.raises(NoPrincipal):
        apply_lk(S("p |- q"), LKRule.Id, NO_ARGS)


def test_forall_left_consumes_principal():
    app = apply_lk(S("forall x. P(x) |- P(3)"), LKRule.ForallL,
                   RuleArgs(witness_term=parse_term("3")))
    assert app.premises == (S("P(3) |- P(3)"),)


def test_contraction_keeps_a_copy_for_reuse():
    goal = S("forall x. P(x) |- P(1) /\\ P(2)")
    step1 = apply_lk(goal, LKRule.ContrL, RuleArgs(principal=("left", 0)))
    duplicated = step1.premises[0]
    assert duplicated == S("forall x. P(x), forall x. P(x) |- P(1) /\\ P(2)")
    step2 = apply_lk(duplicated, LKRule.ForallL,
                     RuleArgs(principal=("left", 0), witness_term=parse_term("1")))
    assert step2.premises == (S("P(1), forall x. P(x) |- P(1) /\\ P(2)"),)


def test_cut_premises():
    app = apply_lk(S("p |- q"), LKRule.Cut, RuleArgs(cut_formula=parse_formula("r")))
    assert app.premises == (S("p |- q, r"), S("p, r |- q"))


def test_imp_left_premises():
    app = apply_lk(S("p => q, p |- q"), LKRule.ImpL, RuleArgs(principal=("left", 0)))
    assert app.premises == (S("p |- q, p"), S("q, p |- q"))


def test_weakening_and_truth_falsity():
    assert apply_lk(S("p, q |- r"), LKRule.WeakL,
                    RuleArgs(principal=("left", 1))).premises == (S("p |- r"),)
    assert apply_lk(S("|- p, true"), LKRule.TruthR, NO_ARGS).premises == ()
    assert apply_lk(S("false, p |-"), LKRule.FalsityL, NO_ARGS).premises == ()


def test_schema_mismatch_wrong_args():
    with pytest.raises(SchemaMismatch):
        apply_lk(S("|- p => q"), LKRule.ImpR, RuleArgs(fresh_var="z"))
    with pytest.raises(SchemaMismatch):
        apply_lk(S("p |- q"), LKRule.Cut, NO_ARGS)
    with pytest.raises(SchemaMismatch):
        apply_lk(S("forall x. P(x) |- q"), LKRule.ForallL, NO_ARGS)


def test_ambiguous_principal_requires_index():
    with pytest.raises(AmbiguousPrincipal):
        apply_lk(S("p => q, p => r |- q"), LKRule.ImpL, NO_ARGS)
    # explicit index resolves it
    app = apply_lk(S("p => q, p => r |- q"), LKRule.ImpL, RuleArgs(principal=("left", 1)))
    assert app.premises[1] == S("p => q, r |- q")


def test_no_principal_at_given_index():
    with pytest.raises(NoPrincipal):
        apply_lk(S("p, q => r |- q"), LKRule.ImpL, RuleArgs(principal=("left", 0)))


def test_z3axiom_not_applied_here():
    with pytest.raises(SchemaMismatch):
        apply_lk(S("|- p"), LKRule.Z3Axiom, NO_ARGS)


def test_applicable_walkthrough_goal():
    listing = applicable_lk(S("|- p => q => (p /\\ q)"))
    assert rules_of(listing) == {LKRule.ImpR, LKRule.WeakR, LKRule.ContrR,
                                 LKRule.Cut, LKRule.Z3Axiom}
    positions = dict(listing)
    assert positions[LKRule.ImpR] == (("right", 0),)


def test_applicable_lists_all_candidates():
    listing = dict(applicable_lk(S("p => q, p => r, p |- q")))
    assert listing[LKRule.ImpL] == (("left", 0), ("left", 1))


def test_applicable_empty_sequent():
    assert rules_of(applicable_lk(S("|-"))) == {LKRule.Cut, LKRule.Z3Axiom}


# ---- fuzzed invariants ---------------------------------------------------------

def _all_valuations(sequent):
    names = sorted(atoms_of(sequent))
    assert len(names) <= 10
    for values in itertools.product((False, True), repeat=len(names)):
        yield dict(zip(names, values))


def _sample_applications(rng, sequent):
    """One validated application per applicable rule (random candidate)."""
    for rule, positions in applicable_lk(sequent):
        if rule is LKRule.Z3Axiom:
            continue
        if rule is LKRule.Cut:
            args = RuleArgs(cut_formula=parse_formula(rng.choice(("p", "q", "p => q"))))
        elif positions:
            args = RuleArgs(principal=rng.choice(positions))
        else:
            args = NO_ARGS
        yield apply_lk(sequent, rule, args)


def test_local_soundness_propositional():
    rng = random.Random(42)
    checked = 0
    for _ in range(120):
        sequent = gen_prop_sequent(rng, depth=3, constants=True)
        for app in _sample_applications(rng, sequent):
            for valuation in _all_valuations(
                    Sequent(sequent.left + tuple(p for pr in app.premises for p in pr.left),
                            sequent.right + tuple(p for pr in app.premises for p in pr.right))):
                if all(holds_sequent(premise, valuation) for premise in app.premises):
                    assert holds_sequent(app.conclusion, valuation), (app.rule, valuation)
            checked += 1
    assert checked > 300


def test_constructor_totality():
    rng = random.Random(43)
    for _ in range(150):
        sequent = gen_prop_sequent(rng, depth=3)
        for app in _sample_applications(rng, sequent):
            again = RuleApplication(app.rule, app.args, app.conclusion, app.premises)
            assert again.premises == app.premises
            recomputed = compute_premises(app.conclusion, app.rule, app.args)
            assert recomputed == app.premises


def test_ill_formed_application_cannot_exist():
    goal = S("|- p => q")
    good = apply_lk(goal, LKRule.ImpR, NO_ARGS)
    with pytest.raises(SchemaMismatch):
        RuleApplication(LKRule.ImpR, NO_ARGS, goal, (S("q |- p"),))
    with pytest.raises(SchemaMismatch):
        RuleApplication(LKRule.ImpR, NO_ARGS, goal, good.premises + good.premises)


def test_eigenvariable_safety_fuzz():
    rng = random.Random(44)
    goals = [("exists x. P(x) |- Q(y)", LKRule.ExistsL),
             ("exists x. Q(x) |- p", LKRule.ExistsL),
             ("P(z) |- forall x. P(x)", LKRule.ForallR),
             ("p, Q(w) |- forall y. Q(y)", LKRule.ForallR)]
    accepted = 0
    for _ in range(200):
        text, rule = rng.choice(goals)
        goal = parse_sequent(text)
        name = rng.choice(("x", "y", "z", "w", "v", "p", "P", "Q"))
        try:
            app = apply_lk(goal, rule, RuleArgs(fresh_var=name))
        except EigenvariableViolation:
            free = free_vars_sequent(goal)
            symbols = {"p", "P", "Q"}
            assert name in free or name in symbols
            continue
        assert name not in free_vars_sequent(app.conclusion)
        accepted += 1
    assert accepted > 30


def test_applicable_rules_all_apply():
    rng = random.Random(45)
    for _ in range(150):
        sequent = gen_prop_sequent(rng, depth=3, constants=True)
        for rule, positions in applicable_lk(sequent):
            if rule is LKRule.Z3Axiom:
                continue
            if rule is LKRule.Cut:
                apply_lk(sequent, rule, RuleArgs(cut_formula=parse_formula("p")))
            elif positions:
                for position in positions:
                    apply_lk(sequent, rule, RuleArgs(principal=position))
            else:
                apply_lk(sequent, rule, NO_ARGS)
