"""First-order translation against the independent Tarskian evaluator."""

from lfdkit import evaluate, make_model, parse_formula
from lfdkit.fol import (
    FOStructure,
    decode_structure,
    encode_structure,
    fo_eval,
    fo_free_vars,
    print_fo,
    print_tptp,
    translate,
)
from lfdkit.syntax import Vocabulary, closure

from _corpus import load_fixture_model

MODEL_AR = load_fixture_model("model-ar")


def test_printed_translations():
    t = translate(parse_formula("dep({x},y)"), MODEL_AR.vocab)
    assert print_fo(t) == "forall y, y'. ((A(x,y) & A(x,y')) -> y = y')"
    t2 = translate(parse_formula("D{x}(P(y))"), MODEL_AR.vocab)
    assert print_fo(t2) == "forall y. (A(x,y) -> P(y))"
    t3 = translate(parse_formula("P(x) & R(x,y)"), MODEL_AR.vocab)
    assert print_fo(t3) == "(P(x) & R(x,y))"
    # a projection atom degenerates to a tautology over its scope
    assert print_fo(translate(parse_formula("dep({x},x)"), MODEL_AR.vocab)) == "x = x"
    assert (
        print_fo(translate(parse_formula("dep({},x)"), MODEL_AR.vocab))
        == "forall x, y, x', y'. ((A(x,y) & A(x',y')) -> x = x')"
    )


def test_tptp_output_shape():
    t = translate(parse_formula("dep({x},y)"), MODEL_AR.vocab)
    out = print_tptp(t)
    assert out.startswith("(! [")
    assert "team(" in out and "=>" in out


def test_extended_atoms_translate_too():
    # equality becomes first-order equality, inclusion an existential
    # over the team relation; both stay faithful to the evaluator
    s = encode_structure(MODEL_AR)
    for text in ("x = y", "inc((y),(x))", "inc((x,y),(x,y))"):
        phi = parse_formula(text)
        t = translate(phi, MODEL_AR.vocab)
        for i, row in enumerate(MODEL_AR.team):
            assert evaluate(MODEL_AR, i, phi) == fo_eval(s, row.as_dict(), t), text


def test_encode_decode_round_trip():
    s = encode_structure(MODEL_AR)
    assert s.team is not None
    back = decode_structure(s)
    assert back.domain == MODEL_AR.domain
    assert back.interp == MODEL_AR.interp
    assert tuple(a.values for a in back.team) == tuple(
        a.values for a in MODEL_AR.team
    )


def test_oracle_on_fixture_closure():
    """eval and fo_eval-of-translation agree on every closure member."""
    s = encode_structure(MODEL_AR)
    cl = closure(parse_formula("dep({x},y)"))
    for phi in cl.formulas:
        t = translate(phi, MODEL_AR.vocab)
        for i, row in enumerate(MODEL_AR.team):
            assert evaluate(MODEL_AR, i, phi) == fo_eval(s, row.as_dict(), t), (
                f"mismatch on member {i}"
            )


def test_oracle_independent_of_primed_seed_values():
    """Free variables of the translation stay inside V, so seeding the
    environment with arbitrary values for the primed helpers must not
    change any verdict."""
    from itertools import product

    s = encode_structure(MODEL_AR)
    phi = parse_formula("dep({x},y) & D{}(P(y))")
    t = translate(phi, MODEL_AR.vocab)
    for i, row in enumerate(MODEL_AR.team):
        want = evaluate(MODEL_AR, i, phi)
        for xv, yv in product(MODEL_AR.domain, repeat=2):
            alpha = dict(row.as_dict())
            alpha["x'"] = xv
            alpha["y'"] = yv
            assert fo_eval(s, alpha, t) == want


def test_fo_free_vars():
    t = translate(parse_formula("dep({x},y)"), MODEL_AR.vocab)
    assert fo_free_vars(t) == frozenset({"x"})


def test_fo_eval_on_hand_built_structure():
    s = FOStructure(domain=(0, 1), relations={"E": frozenset({(0, 1)})})
    t = translate(
        parse_formula("E(x,y)"), Vocabulary.make(["x", "y"], {"E": 2})
    )
    assert fo_eval(s, {"x": 0, "y": 1}, t)
    assert not fo_eval(s, {"x": 1, "y": 0}, t)


def test_quantifier_does_not_leak_into_sibling_conjuncts():
    """A variable bound inside one conjunct stays untouched for its free
    occurrence in the next conjunct."""
    m = make_model(
        ["x", "y"],
        {"P": 1, "R": 2},
        [0, 1],
        {"P": [(0,), (1,)], "R": [(1, 1)]},
        [{"x": 0, "y": 1}, {"x": 1, "y": 1}],
    )
    phi = parse_formula("D{y}(P(x)) & R(y,x)")
    t = translate(phi, m.vocab)
    s = encode_structure(m)
    # at (x=0, y=1): the box holds but R(1,0) fails
    assert evaluate(m, 0, phi) is False
    assert fo_eval(s, {"x": 0, "y": 1}, t) is False
    assert evaluate(m, 1, phi) is True
    assert fo_eval(s, {"x": 1, "y": 1}, t) is True
