#!/usr/bin/env python3
"""Unravel a type model into a tree-shaped team and cut it at depth 3.

The unravelled model's objects are good paths; the cut-off keeps truth of
every closure formula at short paths while staying finite, which is the
heart of the finite-model construction.
"""

from pathlib import Path

from lfdkit import closure, cutoff, induced_type_model, parse_formula, unravel
from lfdkit.io import load_json, model_from_json
from lfdkit.unravel import (
    check_restricted_truth_lemma,
    expand_dependence_predicates,
    generate_partial_isos,
    tree_decomposition,
    verify_k_tree,
)

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
model = model_from_json(load_json(FIXTURES / "model-a.json"))
cl = closure(parse_formula("dep({x},y)"))
tm = induced_type_model(model, cl)
print(f"type model: {len(tm.types)} realised types")

u = unravel(tm, 0, 3)
print(
    f"unravelled: {len(u.paths)} good paths, {len(u.model.domain)} objects, "
    f"team of {len(u.model.team)}, branching degree {u.branching_degree()}"
)

k = len(cl.variables)
parents, bags = tree_decomposition(u)
print(f"is a {k}-tree:", verify_k_tree(u.model, parents, bags, k=k))

cut = cutoff(u)
lemma = check_restricted_truth_lemma(cut)
print(f"cut-off: team of {len(cut.model.team)}, truth lemma clean: {lemma.ok}")

expanded = expand_dependence_predicates(cut)
deps = sorted(set(expanded.model.interp) - set(cut.model.interp))
print("dependence predicates added:", ", ".join(deps))

isos = generate_partial_isos(expanded)
print(f"partial isomorphisms onto companions: {len(isos)}")
