"""Type enumeration, validation, and the satisfiability decision."""

import pytest
from hypothesis import given, strategies as st

from lfdkit import (
    extract_type,
    induced_type_model,
    parse_formula,
    satisfiable,
    validate_type_model,
)
from lfdkit.errors import ResourceCapError
from lfdkit.syntax import DAtom, closure, subsets_of
from lfdkit.typemodels import (
    POSITIVE_CAP,
    PsiType,
    TypeModel,
    enumerate_psi_types,
    is_psi_type,
    psi_type_violations,
    requirements,
    type_dep_closure,
    type_sim,
)

from _corpus import load_fixture_model, suite_formulas

MODEL_A = load_fixture_model("model-a")
CL = closure(parse_formula("dep({x},y)"))


def test_extract_type_fixture_row0():
    sigma = extract_type(MODEL_A, 0, CL)
    positives = [f for f in sigma.printed() if not f.startswith("!")]
    assert positives == [
        "dep({x},x)",
        "dep({y},x)",
        "dep({y},y)",
        "dep({x,y},x)",
        "dep({x,y},y)",
    ]
    assert is_psi_type(sigma)


def test_extract_type_all_rows_are_types():
    for i in range(len(MODEL_A.team)):
        assert is_psi_type(extract_type(MODEL_A, i, CL))


def test_induced_type_model_fixture():
    tm = induced_type_model(MODEL_A, CL)
    assert len(tm) == 3
    assert validate_type_model(tm).ok


def test_type_dep_closure_is_read_off_atoms():
    sigma = extract_type(MODEL_A, 2, CL)
    assert type_dep_closure(sigma, frozenset({"x"})) == frozenset({"x", "y"})
    sigma0 = extract_type(MODEL_A, 0, CL)
    assert type_dep_closure(sigma0, frozenset({"x"})) == frozenset({"x"})
    assert type_dep_closure(sigma0, frozenset()) == frozenset()


def test_condition_violations_are_labelled():
    cl = closure(parse_formula("P(x)"))
    # empty bitset: misses projections and decides no complement pair
    empty = PsiType(cl, 0)
    tags = {v[:3] for v in psi_type_violations(empty)}
    assert "(a)" in tags
    assert "(d)" in tags
    # both a formula and its negation
    idx = cl.index
    p = idx[parse_formula("P(x)")]
    notp = idx[parse_formula("!P(x)")]
    contradictory = PsiType.from_indices(cl, [p, notp])
    assert any(v.startswith("(a)") for v in psi_type_violations(contradictory))


def test_projection_atoms_forced():
    for sigma in enumerate_psi_types(CL):
        for xs in subsets_of(CL.variables):
            for y in xs:
                assert sigma.has(CL.index[DAtom(xs, y)])


def test_composition_condition():
    # a type with dep({x},y) must give {x} at least {y}'s whole closure
    for sigma in enumerate_psi_types(CL):
        for xs in subsets_of(CL.variables):
            dep_xs = type_dep_closure(sigma, xs)
            for ys in subsets_of(CL.variables):
                if ys <= dep_xs:
                    assert type_dep_closure(sigma, ys) <= dep_xs


def test_type_sim_empty_scope_is_equivalence():
    types = enumerate_psi_types(CL)
    empty = frozenset()
    for a in types:
        assert type_sim(a, a, empty)
        for b in types:
            assert type_sim(a, b, empty) == type_sim(b, a, empty)


def test_enumeration_cap():
    cl = closure(parse_formula("dep({x},y) & !dep({y},x)"))
    assert len(cl) == 18
    with pytest.raises(ResourceCapError):
        enumerate_psi_types(cl, cap=2)
    assert POSITIVE_CAP >= len(cl) // 2


def test_satisfiable_verdicts():
    sat = satisfiable(parse_formula("dep({x},y) & !dep({y},x)"))
    assert sat.satisfiable
    assert sat.status == "SAT"
    assert len(sat.model.types) == 1
    assert validate_type_model(sat.model).ok
    phi = parse_formula("dep({x},y) & !dep({y},x)")
    assert phi in sat.model.types[sat.type_index]

    unsat = satisfiable(parse_formula("P(x) & !P(x)"))
    assert not unsat.satisfiable
    assert unsat.status == "UNSAT"
    assert unsat.type_index is None


def test_satisfiable_on_extracted_types():
    # the conjunction of any realised type is satisfiable again
    from lfdkit.syntax import conj

    sigma = extract_type(MODEL_A, 0, CL)
    phi = conj(sigma.formulas())
    result = satisfiable(phi)
    assert result.satisfiable


def test_validate_type_model_flags_missing_witness():
    cl = closure(parse_formula("D{x}(P(y))"))
    tm = induced_type_model(MODEL_A, cl)
    assert validate_type_model(tm).ok
    # a type refuting D{x}P(y) alone has an unmet obligation unless it
    # can blame itself
    for i, sigma in enumerate(tm.types):
        singleton = TypeModel(cl, (sigma,))
        report = validate_type_model(singleton)
        needs = [
            (xs, body)
            for xs, body in requirements(sigma)
            if not (type_sim(sigma, sigma, xs) and not sigma.has(body))
        ]
        assert report.ok == (not needs)


@given(st.integers(0, 19))
def test_closure_idempotent_on_suite(i):
    text, phi, _ = suite_formulas()[i]
    cl = closure(phi)
    for f in cl.formulas:
        assert f in cl
