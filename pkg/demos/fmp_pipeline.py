#!/usr/bin/env python3
"""End-to-end finite model pipeline for a satisfiable formula.

Chains satisfiability, unravelling, cut-off, dependence-predicate
expansion and partial-isomorphism generation into one certificate: a
finite model plus an assignment where the input formula is true.
"""

from lfdkit import evaluate
from lfdkit.parser import parse_formula
from lfdkit.pipeline import run_fmp_pipeline

phi = parse_formula("dep({x},y) & !dep({y},x)")
result = run_fmp_pipeline(phi, attempt_herwig=True, herwig_max_size=2)

print("status:", result.status)
for stage in result.stages:
    rest = ", ".join(f"{k}={v}" for k, v in stage.items() if k != "stage")
    print(f"  {stage['stage']}: {rest}")

model, member = result.model, result.assignment
print(
    f"certificate: {len(model.domain)} objects, team of {len(model.team)}, "
    f"true at {member.as_dict()}"
)
assert evaluate(model, model.index_of(member), phi)

unsat = run_fmp_pipeline(parse_formula("P(x) & !P(x)"))
print("contradiction:", unsat.status, "-", unsat.reason)
