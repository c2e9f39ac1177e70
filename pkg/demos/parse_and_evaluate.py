#!/usr/bin/env python3
"""Parse formulas and evaluate them over a small dependence model.

Shows the dual quantifier/atom pair for functional dependence and how
truth at a team member depends on the whole team, not just that row.
"""

from lfdkit import evaluate, make_model, parse_formula
from lfdkit.syntax import print_formula

model = make_model(
    variables=["x", "y"],
    predicates={"P": 1, "R": 2},
    domain=[0, 1, 2],
    interp={"P": [(0,), (1,)], "R": [(0, 1), (1, 1)]},
    team=[{"x": 0, "y": 1}, {"x": 1, "y": 1}, {"x": 2, "y": 0}],
)

for text in [
    "P(x)",
    "R(x,y)",
    "dep({x},y)",          # y is functionally determined by x across the team
    "D{x} P(x)",           # P holds at every member agreeing with this one on x
    "E{x}(R(x,y))",        # some member agreeing on x satisfies R
    "dep({},y) | !dep({},y)",
]:
    phi = parse_formula(text)
    verdicts = [evaluate(model, i, phi) for i in range(len(model.team))]
    print(f"{str(phi):28} {verdicts}")

# dependence is a team property: shrinking the team can only preserve it
sub = make_model(
    variables=["x", "y"],
    predicates={"P": 1, "R": 2},
    domain=[0, 1, 2],
    interp={"P": [(0,), (1,)], "R": [(0, 1), (1, 1)]},
    team=[{"x": 0, "y": 1}, {"x": 1, "y": 1}],
)
phi = parse_formula("dep({x},y)")
print("full team  dep({x},y):", evaluate(model, 0, phi))
print("sub team   dep({x},y):", evaluate(sub, 0, phi))
