#!/usr/bin/env python3
"""State-based semantics: agreement relations instead of an explicit team.

A dependence model converts to a relational one whose states are the team
members; modal evaluation there matches team evaluation.  General
relational models need not satisfy the standard frame conditions, but the
transitive closure over their depth-3 histories does.
"""

from pathlib import Path

from lfdkit import closure, evaluate, parse_formula
from lfdkit.io import load_json, model_from_json, relational_from_json
from lfdkit.relational import (
    build_histories,
    modal_eval,
    to_relational,
    transitive_closure_relations,
    validate_relational,
)

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
model = model_from_json(load_json(FIXTURES / "model-a.json"))
r = to_relational(model)
print(f"states: {r.states}")
print("standard frame conditions:", validate_relational(r, standard=True).ok)

cl = closure(parse_formula("dep({x},y)"))
mismatches = sum(
    modal_eval(r, i, phi) != evaluate(model, i, phi)
    for phi in cl.formulas
    for i in range(len(model.team))
)
print(f"modal vs team evaluation mismatches: {mismatches}")

general = relational_from_json(load_json(FIXTURES / "general-d.json"))
gaps = [v.condition for v in validate_relational(general, standard=True).violations]
print("general model standard gaps:", sorted(set(gaps)))

histories = build_histories(general, 0, 3)
print(f"depth-3 histories: {len(histories.histories)}")
closed = transitive_closure_relations(histories)
print(
    "history closure satisfies the standard conditions:",
    validate_relational(closed, standard=True).ok,
)
