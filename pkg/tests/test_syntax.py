"""Parser, printer, and closure-set behaviour."""

import pytest
from hypothesis import given, strategies as st

from lfdkit import parse_formula
from lfdkit.errors import ParseError, UnsupportedAtomError, VocabularyError
from lfdkit.syntax import (
    And,
    DAtom,
    DQuant,
    Eq,
    Incl,
    Not,
    PredAtom,
    Vocabulary,
    closure,
    free_vars,
    infer_vocabulary,
    is_core,
    modal_depth,
    print_formula,
    subsets_of,
)


def test_parse_atoms():
    assert parse_formula("P(x)") == PredAtom("P", ("x",))
    assert parse_formula("R(x,y)") == PredAtom("R", ("x", "y"))
    assert parse_formula("dep({x},y)") == DAtom(frozenset({"x"}), "y")
    assert parse_formula("dep({},y)") == DAtom(frozenset(), "y")
    assert parse_formula("x = y") == Eq("x", "y")
    assert parse_formula("inc((x),(y))") == Incl(("x",), ("y",))


def test_parse_connectives_and_quantifier():
    phi = parse_formula("P(x) & !P(y)")
    assert phi == And(PredAtom("P", ("x",)), Not(PredAtom("P", ("y",))))
    psi = parse_formula("D{x,y}(P(x))")
    assert psi == DQuant(frozenset({"x", "y"}), PredAtom("P", ("x",)))


def test_sugar_desugars():
    # E{X} is the dual of D{X}; double negations inside collapse
    assert print_formula(parse_formula("E{x}(P(y))")) == "!D{x} !P(y)"
    assert print_formula(parse_formula("E{x}(!P(y))")) == "!D{x} P(y)"
    assert print_formula(parse_formula("P(x) -> E{x}(P(y))")) == "!(P(x) & D{x} !P(y))"
    assert print_formula(parse_formula("P(x) | P(y)")) == "!(!P(x) & !P(y))"
    # a multi-target dependence atom is a conjunction of single targets
    assert parse_formula("dep({x},{y,x})") == And(
        DAtom(frozenset({"x"}), "x"), DAtom(frozenset({"x"}), "y")
    )


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError):
        parse_formula("P(x")
    with pytest.raises(ParseError):
        parse_formula("dep({x},{})")
    with pytest.raises(ParseError):
        parse_formula("& P(x)")
    with pytest.raises(ParseError):
        parse_formula("")


def test_vocabulary_checking():
    vocab = Vocabulary.make(["x"], {"P": 1})
    assert parse_formula("P(x)", vocab) == PredAtom("P", ("x",))
    with pytest.raises(VocabularyError):
        parse_formula("P(y)", vocab)
    with pytest.raises(VocabularyError):
        parse_formula("Q(x)", vocab)
    with pytest.raises(VocabularyError):
        parse_formula("P(x,x)", vocab)


def test_free_vars_and_depth():
    phi = parse_formula("D{x}(P(y)) & dep({x},y)")
    # truth at s only looks at s's values on the agreement scope
    assert free_vars(phi) == frozenset({"x"})
    assert free_vars(parse_formula("dep({x},y)")) == frozenset({"x"})
    assert free_vars(parse_formula("P(y)")) == frozenset({"y"})
    assert modal_depth(parse_formula("P(x)")) == 0
    assert modal_depth(phi) == 1
    assert modal_depth(parse_formula("D{x}(D{}(P(x)))")) == 2


def test_core_recognition():
    assert is_core(parse_formula("D{x}(P(y)) & dep({x},y)"))
    assert not is_core(parse_formula("x = y"))
    assert not is_core(parse_formula("inc((x),(y))"))


def test_closure_of_unary_atom():
    cl = closure(parse_formula("P(x)"))
    assert cl.printed() == [
        "P(x)",
        "dep({},x)",
        "dep({x},x)",
        "!P(x)",
        "!dep({},x)",
        "!dep({x},x)",
    ]


def test_closure_sizes():
    assert len(closure(parse_formula("dep({x},y)"))) == 16
    assert len(closure(parse_formula("dep({x},y) & !dep({y},x)"))) == 18


def test_closure_contains_subformulas_atoms_negations():
    phi = parse_formula("D{x}(P(y))")
    cl = closure(phi)
    assert phi in cl
    assert PredAtom("P", ("y",)) in cl
    for xs in subsets_of(cl.variables):
        for y in cl.variables:
            assert DAtom(xs, y) in cl
    for f in cl.formulas:
        if not isinstance(f, Not):
            assert Not(f) in cl


def test_closure_rejects_extended_atoms():
    with pytest.raises(UnsupportedAtomError):
        closure(parse_formula("x = y"))
    with pytest.raises(UnsupportedAtomError):
        closure(parse_formula("inc((x),(y))"))


def test_infer_vocabulary():
    vocab = infer_vocabulary(parse_formula("R(x,y) & dep({x},y)"))
    assert vocab.variables == ("x", "y")
    assert vocab.arity == {"R": 2}


_leaf = st.sampled_from(
    ["P(x)", "P(y)", "R(x,y)", "R(y,y)", "dep({x},y)", "dep({},x)", "dep({x,y},x)"]
)


@st.composite
def _core_texts(draw, depth=3):
    if depth == 0:
        return draw(_leaf)
    kind = draw(st.integers(0, 3))
    if kind == 0:
        return draw(_leaf)
    if kind == 1:
        return f"!{draw(_core_texts(depth - 1))}"
    if kind == 2:
        return f"({draw(_core_texts(depth - 1))} & {draw(_core_texts(depth - 1))})"
    xs = draw(st.sampled_from(["{}", "{x}", "{y}", "{x,y}"]))
    return f"D{xs} {draw(_core_texts(depth - 1))}"


@given(_core_texts())
def test_print_parse_round_trip(text):
    phi = parse_formula(text)
    assert parse_formula(print_formula(phi)) == phi
