"""JSON forms for every artifact the command line reads or writes.

Each `*_to_json` returns plain dict/list data; each `*_from_json` is its
inverse and validates as it rebuilds.  Serialized output is sorted where
order carries no meaning (relation tuples, atom keys) and preserved
where it does (team order, domain order, closure indexing).
"""

from __future__ import annotations

import json
from typing import Mapping, Sequence

from .errors import ConstructionError, ParseError
from .fol import FOStructure
from .herwig import PartialIso
from .parser import parse_formula
from .relational import RelationalModel, parse_subset_label, subset_label
from .semantics import DependenceModel, make_model
from .syntax import Vocabulary, closure, print_formula
from .typemodels import PsiType, TypeModel


def dump_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def save_json(data, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_json(data))


def vocabulary_to_json(v: Vocabulary) -> dict:
    return {
        "variables": list(v.variables),
        "predicates": {name: arity for name, arity in v.predicates},
    }


def vocabulary_from_json(data: Mapping) -> Vocabulary:
    return Vocabulary.make(data["variables"], data.get("predicates", {}))


def model_to_json(m: DependenceModel) -> dict:
    return {
        "vocabulary": vocabulary_to_json(m.vocab),
        "domain": list(m.domain),
        "interpretation": {
            pred: sorted([list(t) for t in ts])
            for pred, ts in m.interp.items()
        },
        "team": [s.as_dict() for s in m.team],
    }


def model_from_json(data: Mapping) -> DependenceModel:
    voc = data["vocabulary"]
    return make_model(
        voc["variables"],
        voc.get("predicates", {}),
        data["domain"],
        {pred: [tuple(t) for t in ts] for pred, ts in data["interpretation"].items()},
        data["team"],
    )


def type_model_to_json(tm: TypeModel) -> dict:
    return {
        "origin": print_formula(tm.closure.origin),
        "formulas": tm.closure.printed(),
        "types": [sorted(sigma.indices) for sigma in tm.types],
    }


def type_model_from_json(data: Mapping) -> TypeModel:
    try:
        origin = parse_formula(data["origin"])
    except ParseError as exc:
        raise ConstructionError(f"unreadable origin formula: {exc}") from exc
    cl = closure(origin)
    recorded = data.get("formulas")
    if recorded is not None and list(recorded) != cl.printed():
        raise ConstructionError(
            "recorded closure listing does not match the rebuilt closure"
        )
    for idxs in data["types"]:
        for i in idxs:
            if not 0 <= i < len(cl.formulas):
                raise ConstructionError(f"type index {i} outside the closure")
    types = tuple(PsiType.from_indices(cl, idxs) for idxs in data["types"])
    return TypeModel(cl, types)


def _dep_key(xs: frozenset[str], y: str) -> str:
    return f"D({subset_label(xs)},{y})"


def _parse_dep_key(key: str) -> tuple[frozenset[str], str]:
    body = key.strip()
    if not (body.startswith("D(") and body.endswith(")")):
        raise ValueError(f"not a dependence-atom key: {key!r}")
    inner = body[2:-1]
    brace = inner.index("}")
    xs = parse_subset_label(inner[: brace + 1])
    rest = inner[brace + 1 :]
    if not rest.startswith(","):
        raise ValueError(f"not a dependence-atom key: {key!r}")
    return xs, rest[1:].strip()


def _pred_key(pred: str, args: Sequence[str]) -> str:
    return f"{pred}({','.join(args)})"


def _parse_pred_key(key: str) -> tuple[str, tuple[str, ...]]:
    body = key.strip()
    if not body.endswith(")") or "(" not in body:
        raise ValueError(f"not a predicate-atom key: {key!r}")
    cut = body.index("(")
    name = body[:cut]
    argstr = body[cut + 1 : -1].strip()
    args = tuple(a.strip() for a in argstr.split(",")) if argstr else ()
    return name, args


def relational_to_json(r: RelationalModel) -> dict:
    return {
        "variables": list(r.variables),
        "states": list(r.states),
        "relations": {
            subset_label(xs): sorted([list(p) for p in pairs])
            for xs, pairs in r.relations.items()
        },
        "depAtoms": {
            _dep_key(xs, y): sorted(members)
            for (xs, y), members in r.dep_atoms.items()
        },
        "predAtoms": {
            _pred_key(pred, args): sorted(members)
            for (pred, args), members in r.pred_atoms.items()
        },
    }


def relational_from_json(data: Mapping) -> RelationalModel:
    relations = {
        parse_subset_label(label): [tuple(p) for p in pairs]
        for label, pairs in data.get("relations", {}).items()
    }
    dep_atoms = {
        _parse_dep_key(key): members
        for key, members in data.get("depAtoms", {}).items()
    }
    pred_atoms = {
        _parse_pred_key(key): members
        for key, members in data.get("predAtoms", {}).items()
    }
    variables = data.get("variables")
    if variables is None:
        seen: set[str] = set()
        for xs in relations:
            seen |= xs
        for xs, y in dep_atoms:
            seen |= xs | {y}
        for _, args in pred_atoms:
            seen |= set(args)
        variables = sorted(seen)
    return RelationalModel.make(
        variables, data["states"], relations, dep_atoms, pred_atoms
    )


def fo_structure_to_json(s: FOStructure) -> dict:
    out: dict = {
        "domain": list(s.domain),
        "relations": {
            name: sorted([list(t) for t in ts])
            for name, ts in s.relations.items()
        },
    }
    if s.team is not None:
        out["teamPredicate"] = {
            "variables": list(s.variables) if s.variables else [],
            "tuples": sorted([list(t) for t in s.team]),
        }
    return out


def fo_structure_from_json(data: Mapping) -> FOStructure:
    team = None
    variables = None
    if "teamPredicate" in data and data["teamPredicate"] is not None:
        block = data["teamPredicate"]
        team = frozenset(tuple(t) for t in block.get("tuples", []))
        names = block.get("variables") or []
        variables = tuple(names) if names else None
    return FOStructure(
        domain=tuple(data["domain"]),
        relations={
            name: frozenset(tuple(t) for t in ts)
            for name, ts in data.get("relations", {}).items()
        },
        team=team,
        variables=variables,
    )


def partial_iso_to_json(p: PartialIso) -> list:
    return [[a, b] for a, b in p.pairs]


def partial_iso_from_json(data: Sequence) -> PartialIso:
    pairs = [tuple(item) for item in data]
    if any(len(pair) != 2 for pair in pairs):
        raise ConstructionError("a partial map entry must be a two-element pair")
    return PartialIso.make(dict(pairs))


def partial_isos_to_json(ps: Sequence[PartialIso]) -> list:
    return [partial_iso_to_json(p) for p in ps]


def partial_isos_from_json(data: Sequence) -> list[PartialIso]:
    return [partial_iso_from_json(item) for item in data]


def herwig_bundle_to_json(
    ps: Sequence[PartialIso], hats: Mapping[PartialIso, PartialIso]
) -> dict:
    missing = [p for p in ps if p not in hats]
    if missing:
        raise ConstructionError("every listed map needs an assigned automorphism")
    return {
        "maps": partial_isos_to_json(ps),
        "hats": [partial_iso_to_json(hats[p]) for p in ps],
    }


def herwig_bundle_from_json(
    data: Mapping,
) -> tuple[list[PartialIso], dict[PartialIso, PartialIso]]:
    ps = partial_isos_from_json(data.get("maps", []))
    hat_list = partial_isos_from_json(data.get("hats", []))
    if len(hat_list) != len(ps):
        raise ConstructionError("maps and hats must align one to one")
    return ps, dict(zip(ps, hat_list))
