#!/usr/bin/env python3
"""Exhaustive search for small models of a formula.

Enumerates domains and teams up to the given bounds in a canonical order,
so the first witness found is deterministic.  This is the independent
oracle against which the type-based satisfiability check is tested.
"""

from lfdkit import bounded_model_search, evaluate, parse_formula

for text in [
    "dep({x},y) & !dep({y},x)",
    "P(x) & !P(y)",
    "E{}(P(x)) & E{}(!P(x))",
    "P(x) & !P(x)",
]:
    phi = parse_formula(text)
    hit = bounded_model_search(phi, max_domain=3, max_team=4)
    if hit is None:
        print(f"{text:32} no model within bounds")
        continue
    model, witness = hit
    print(
        f"{text:32} domain {model.domain}, team of {len(model.team)}, "
        f"true at {witness.as_dict()}"
    )
    assert evaluate(model, model.index_of(witness), phi)
