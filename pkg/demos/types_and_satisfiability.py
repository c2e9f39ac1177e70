#!/usr/bin/env python3
"""Extract member types, validate the induced type model, decide satisfiability.

A type records which closure formulas hold at one team member; the family
of realised types is itself a model-like object that can be validated and
searched for satisfying types without ever touching concrete objects.
"""

from lfdkit import (
    closure,
    extract_type,
    induced_type_model,
    make_model,
    parse_formula,
)
from lfdkit.typemodels import satisfiable, validate_type_model

phi = parse_formula("dep({x},y) & !dep({y},x)")
cl = closure(phi)
print(f"closure of {phi}: {len(cl.formulas)} formulas")
for f in cl.formulas[:6]:
    print("  ", f)
print("   ...")

model = make_model(
    variables=["x", "y"],
    predicates={"P": 1, "R": 2},
    domain=["a", "b"],
    interp={"P": [("a",)], "R": []},
    team=[{"x": "a", "y": "a"}, {"x": "b", "y": "a"}],
)
for i in range(len(model.team)):
    sigma = extract_type(model, i, cl)
    held = [f for f in cl.formulas if f in sigma]
    print(f"type of member {i}: {len(held)} closure formulas hold")

tm = induced_type_model(model, cl)
print("induced type model valid:", validate_type_model(tm).ok)

for text in ["dep({x},y) & !dep({y},x)", "P(x) & !P(x)"]:
    r = satisfiable(parse_formula(text))
    verdict = "SAT" if r.satisfiable else "UNSAT"
    print(f"{text:28} {verdict}")
