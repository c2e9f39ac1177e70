"""Team-relative evaluation on the frozen fixture models."""

import pytest
from hypothesis import given, strategies as st

from lfdkit import evaluate, make_model, parse_formula, validate_model
from lfdkit.errors import AssignmentNotInTeam, EvaluationError
from lfdkit.semantics import (
    Assignment,
    dependence_closure_at,
    agrees,
)
from lfdkit.syntax import free_vars

from _corpus import load_fixture_model, random_formulas, random_models

MODEL_A = load_fixture_model("model-a")


def test_fixture_is_valid():
    assert validate_model(MODEL_A).ok


def test_team_member_lookup():
    assert MODEL_A.index_of(0) == 0
    assert MODEL_A.index_of({"x": "a", "y": "b"}) == 1
    assert MODEL_A.index_of(Assignment(("x", "y"), ("b", "b"))) == 2
    with pytest.raises(AssignmentNotInTeam):
        MODEL_A.index_of({"x": "b", "y": "a"})
    with pytest.raises(AssignmentNotInTeam):
        MODEL_A.index_of(7)


def test_predicate_and_dependence_atoms():
    # team rows: (a,a), (a,b), (b,b); P holds of b only
    assert not evaluate(MODEL_A, 0, parse_formula("P(x)"))
    assert evaluate(MODEL_A, 2, parse_formula("P(x)"))
    assert evaluate(MODEL_A, 1, parse_formula("P(y)"))
    # rows 0 and 1 share x=a but split on y
    assert not evaluate(MODEL_A, 0, parse_formula("dep({x},y)"))
    assert not evaluate(MODEL_A, 1, parse_formula("dep({x},y)"))
    assert evaluate(MODEL_A, 2, parse_formula("dep({x},y)"))
    # y pins x everywhere: y=a only in row 0, y=b rows agree on nothing? no:
    # rows 1 and 2 share y=b but differ on x
    assert evaluate(MODEL_A, 0, parse_formula("dep({y},x)"))
    assert not evaluate(MODEL_A, 1, parse_formula("dep({y},x)"))


def test_quantifier_ranges_over_agreeing_rows():
    # D{x} at row 0 ranges over rows 0 and 1
    assert not evaluate(MODEL_A, 0, parse_formula("D{x}(P(y))"))
    assert evaluate(MODEL_A, 0, parse_formula("E{x}(P(y))"))
    assert evaluate(MODEL_A, 2, parse_formula("D{x}(P(y))"))
    # D{} ranges over the whole team
    assert not evaluate(MODEL_A, 0, parse_formula("D{}(P(y))"))
    assert evaluate(MODEL_A, 0, parse_formula("E{}(P(x) & P(y))"))


def test_equality_and_inclusion_atoms_evaluate():
    assert evaluate(MODEL_A, 0, parse_formula("x = y"))
    assert not evaluate(MODEL_A, 1, parse_formula("x = y"))
    # some row's x equals row 1's y
    assert evaluate(MODEL_A, 1, parse_formula("inc((y),(x))"))
    assert evaluate(MODEL_A, 0, parse_formula("inc((x,y),(x,y))"))
    assert not evaluate(MODEL_A, 1, parse_formula("inc((y,x),(x,y))"))


def test_dependence_closure_at():
    assert dependence_closure_at(MODEL_A, 0, frozenset()) == frozenset()
    assert dependence_closure_at(MODEL_A, 0, frozenset({"y"})) == frozenset({"x", "y"})
    assert dependence_closure_at(MODEL_A, 1, frozenset({"x"})) == frozenset({"x"})
    assert dependence_closure_at(MODEL_A, 2, frozenset({"x"})) == frozenset({"x", "y"})


def test_evaluate_rejects_unknown_predicate():
    stray = make_model(["x"], {"Q": 1}, ["a"], {"Q": []}, [{"x": "a"}])
    with pytest.raises(EvaluationError):
        evaluate(stray, 0, parse_formula("P(x)"))


def test_agrees_helper():
    s, t = MODEL_A.team[0], MODEL_A.team[1]
    assert agrees(s, t, ["x"])
    assert not agrees(s, t, ["y"])
    assert agrees(s, t, [])


_members = st.integers(0, 3)


@given(st.integers(0, 199), st.integers(0, 49))
def test_locality(model_idx, formula_idx):
    """Rows agreeing on a formula's free variables get the same verdict."""
    models = _MODELS
    m = models[model_idx]
    phi = _FORMULAS[formula_idx]
    fv = free_vars(phi)
    for i, s in enumerate(m.team):
        for j, t in enumerate(m.team):
            if agrees(s, t, fv):
                assert evaluate(m, i, phi) == evaluate(m, j, phi)


_MODELS = random_models(200)
_FORMULAS = random_formulas(50)
