#!/usr/bin/env python3
"""Translate team formulas to two-sorted first-order logic and cross-check.

The translation swaps the team for an explicit assignment-table predicate;
an independent Tarskian evaluator then agrees with team evaluation at
every member.
"""

from lfdkit import encode_structure, evaluate, fo_eval, make_model, parse_formula, translate
from lfdkit.fol import print_fo
from lfdkit.syntax import Vocabulary

vocab = Vocabulary.make(("x", "y"), {"P": 1, "R": 2})
model = make_model(
    variables=["x", "y"],
    predicates={"P": 1, "R": 2},
    domain=[0, 1],
    interp={"P": [(0,)], "R": [(0, 1), (1, 0)]},
    team=[{"x": 0, "y": 1}, {"x": 1, "y": 0}],
)
structure = encode_structure(model)

for text in ["dep({x},y)", "D{x} P(x)", "E{y}(R(x,y))"]:
    phi = parse_formula(text)
    fo = translate(phi, vocab)
    print(f"{text}\n  -> {print_fo(fo)}")
    for i, member in enumerate(model.team):
        env = dict(zip(vocab.variables, member.values))
        team_truth = evaluate(model, i, phi)
        fo_truth = fo_eval(structure, env, fo)
        mark = "ok" if team_truth == fo_truth else "MISMATCH"
        print(f"  member {i}: team={team_truth} fo={fo_truth} {mark}")
