import random

import pytest

from genlib import gen_formula
from proofkit.parser import parse_formula, parse_term
from proofkit.syntax import (Exists, Forall, IntLit, PredApp, RelAtom, Var, alpha_eq, free_vars,
                             fresh_name, substitute)


def test_free_vars_bound_variable_dropped():
    assert free_vars(parse_formula("forall x. P(x, y)")) == {"y"}


def test_free_vars_of_relation():
    assert free_vars(parse_formula("x + 1 = 2")) == {"x"}


def test_free_vars_atom_is_empty():
    assert free_vars(parse_formula("p")) == set()


def test_substitute_direct_replacement():
    got = substitute(parse_formula("x = 2"), "x", parse_term("x + 1"))
    assert got == parse_formula("x + 1 = 2")


def test_substitute_renames_captured_binder():
    got = substitute(parse_formula("exists y. x = y"), "x", Var("y"))
    assert got == Exists("y1", RelAtom("=", Var("y"), Var("y1")))


def test_substitute_no_free_occurrence():
    f = parse_formula("forall x. P(x)")
    assert substitute(f, "x", IntLit(3)) == f


def test_fresh_name_scheme():
    assert fresh_name("y", {"x"}) == "y"
    assert fresh_name("y", {"y"}) == "y1"
    assert fresh_name("y", {"y", "y1"}) == "y2"


def test_alpha_eq_quantifier_renaming():
    assert alpha_eq(parse_formula("forall x. P(x)"), parse_formula("forall y. P(y)"))


def test_alpha_eq_no_arithmetic_reasoning():
    assert not alpha_eq(parse_formula("x + 1 = 2"), parse_formula("2 = x + 1"))


def test_alpha_eq_plain():
    assert alpha_eq(parse_formula("p /\\ q"), parse_formula("p /\\ q"))


def test_alpha_eq_distinguishes_free_variables():
    assert not alpha_eq(parse_formula("P(x)"), parse_formula("P(y)"))
    # a bound occurrence is not the same as a free one
    assert not alpha_eq(parse_formula("forall x. P(x)"), parse_formula("forall y. P(x)"))


def test_alpha_eq_mixed_binders():
    assert not alpha_eq(parse_formula("forall x. P(x)"), parse_formula("exists x. P(x)"))


# ---- properties over fuzzed formulas ---------------------------------------

N_CASES = 300


def test_substitute_self_is_alpha_identity():
    rng = random.Random(101)
    for _ in range(N_CASES):
        f = gen_formula(rng, depth=4)
        for var in ("x", "y"):
            assert alpha_eq(substitute(f, var, Var(var)), f)


def test_substitute_free_vars_bound():
    rng = random.Random(102)
    for _ in range(N_CASES):
        f = gen_formula(rng, depth=4)
        t = parse_term("g(z, w + 1)")
        got = free_vars(substitute(f, "x", t))
        upper = (free_vars(f) - {"x"}) | free_vars(t)
        assert got <= upper
        if "x" in free_vars(f):
            assert got == upper


def test_alpha_eq_is_equivalence():
    rng = random.Random(103)
    samples = [gen_formula(rng, depth=4) for _ in range(60)]
    for f in samples:
        assert alpha_eq(f, f)
    for f in samples:
        for g in samples:
            assert alpha_eq(f, g) == alpha_eq(g, f)
            if alpha_eq(f, g):
                assert free_vars(f) == free_vars(g)
    # transitivity through a renamed witness
    for f in samples:
        renamed = _rename_binders(f, "fresh")
        assert alpha_eq(f, renamed)
        again = _rename_binders(renamed, "other")
        assert alpha_eq(renamed, again) and alpha_eq(f, again)


def _rename_binders(f, stem, counter=[0]):
    match f:
        case Forall(v, b) | Exists(v, b):
            counter[0] += 1
            new = f"{stem}{counter[0]}"
            body = substitute(_rename_binders(b, stem), v, Var(new))
            return type(f)(new, body)
        case _:
            try:
                parts = f.__dataclass_fields__
            except AttributeError:
                return f
            values = {name: getattr(f, name) for name in parts}
            for name, val in values.items():
                if hasattr(val, "__dataclass_fields__"):
                    values[name] = _rename_binders(val, stem)
            return type(f)(**values)


def test_fresh_name_never_collides():
    rng = random.Random(104)
    for _ in range(N_CASES):
        avoid = {f"v{rng.randrange(20)}" for _ in range(rng.randrange(10))}
        base = rng.choice(("v1", "v2", "x", "y"))
        assert fresh_name(base, avoid) not in avoid


def test_substitution_preserves_predapp_arity():
    f = parse_formula("P(x) /\\ Q(x, f(x))")
    got = substitute(f, "x", parse_term("g(y, 2)"))
    assert free_vars(got) == {"y"}
    assert isinstance(got.left, PredApp) and len(got.left.args) == 1
