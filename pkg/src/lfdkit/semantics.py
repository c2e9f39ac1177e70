"""Dependence models and team-relative evaluation.

A dependence model pairs a first-order structure with a team: a finite
set of assignments over the vocabulary's variables.  Truth is evaluated
at one team member; the dependence quantifier ranges over teammates
agreeing on the fixed variables, and a dependence atom asserts that
agreement on the fixed variables forces agreement on the dependent one.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .errors import AssignmentNotInTeam, EvaluationError, VocabularyError
from .syntax import (
    And,
    DAtom,
    DQuant,
    Eq,
    Formula,
    Incl,
    Not,
    PredAtom,
    Vocabulary,
)
from .typemodels import ClosureSet, PsiType, TypeModel

ObjId = object  # domain elements are any hashable scalar (str or int)


@dataclass(frozen=True)
class Assignment:
    """Values for every variable, aligned with the vocabulary's order."""

    variables: tuple[str, ...]
    values: tuple

    def __post_init__(self):
        if len(self.variables) != len(self.values):
            raise VocabularyError("assignment does not cover the variables")

    def __getitem__(self, var: str):
        return self.values[self.variables.index(var)]

    def as_dict(self) -> dict:
        return dict(zip(self.variables, self.values))

    @classmethod
    def from_mapping(cls, vocab: Vocabulary, mapping: Mapping) -> "Assignment":
        values = tuple(mapping.get(v) for v in vocab.variables)
        return cls(vocab.variables, values)


@dataclass(frozen=True, eq=False)
class DependenceModel:
    vocab: Vocabulary
    domain: tuple
    interp: Mapping[str, frozenset]
    team: tuple[Assignment, ...]

    @cached_property
    def team_index(self) -> dict[tuple, int]:
        out = {}
        for i, s in enumerate(self.team):
            out.setdefault(s.values, i)
        return out

    def index_of(self, s) -> int:
        """Resolve an assignment (or index) to its first team position."""
        if isinstance(s, int):
            if not 0 <= s < len(self.team):
                raise AssignmentNotInTeam(f"no team member {s}")
            return s
        values = s.values if isinstance(s, Assignment) else tuple(
            s.get(v) for v in self.vocab.variables
        )
        idx = self.team_index.get(values)
        if idx is None:
            raise AssignmentNotInTeam(f"assignment {values!r} is not in the team")
        return idx

    @cached_property
    def is_distinguished(self) -> bool:
        """Distinct variables never share a value in any team member."""
        return all(
            len(set(s.values)) == len(s.values) for s in self.team
        )

    @cached_property
    def is_full(self) -> bool:
        """The team contains every assignment into the domain."""
        want = len(self.domain) ** len(self.vocab.variables)
        return len({s.values for s in self.team}) == want

    def assignment(self, mapping: Mapping) -> Assignment:
        return Assignment.from_mapping(self.vocab, mapping)


def make_model(
    variables: Iterable[str],
    predicates,
    domain: Iterable,
    interp: Mapping,
    team: Iterable[Mapping],
) -> DependenceModel:
    vocab = Vocabulary.make(variables, predicates)
    interp_frozen = {
        p: frozenset(tuple(t) for t in interp.get(p, ())) for p, _ in vocab.predicates
    }
    assignments = tuple(Assignment.from_mapping(vocab, s) for s in team)
    return DependenceModel(vocab, tuple(domain), interp_frozen, assignments)


def validate_model(m: DependenceModel):
    # imported here to keep the report type in one place
    from .typemodels import fresh_report

    report = fresh_report()
    domain = set(m.domain)
    if len(domain) != len(m.domain):
        report.add("domain", "duplicate domain elements")
    if not m.domain:
        report.add("domain", "empty domain")
    arity = m.vocab.arity
    for p, tuples in m.interp.items():
        if p not in arity:
            report.add("interpretation", f"undeclared predicate {p!r}")
            continue
        for t in tuples:
            if len(t) != arity[p]:
                report.add("arity", f"{p}{tuple(t)!r} has arity {len(t)}, expected {arity[p]}")
            for o in t:
                if o not in domain:
                    report.add("interpretation", f"{p} uses {o!r} outside the domain")
    for p in arity:
        if p not in m.interp:
            report.add("interpretation", f"predicate {p!r} has no interpretation")
    if not m.team:
        report.add("team", "empty team")
    seen = set()
    for i, s in enumerate(m.team):
        if s.variables != m.vocab.variables:
            report.add("team", f"assignment {i} is indexed by the wrong variables")
            continue
        for v, o in zip(s.variables, s.values):
            if o is None:
                report.add("totality", f"assignment {i} has no value for {v!r}")
            elif o not in domain:
                report.add("team", f"assignment {i} maps {v!r} to {o!r} outside the domain")
        if s.values in seen:
            report.add("team", f"assignment {i} duplicates an earlier one")
        seen.add(s.values)
    return report


def agrees(s: Assignment, t: Assignment, xs: Iterable[str]) -> bool:
    return all(s[x] == t[x] for x in xs)


class Evaluator:
    """Evaluation against one model with memoisation per (member, formula)."""

    def __init__(self, model: DependenceModel):
        if not model.team:
            raise EvaluationError("cannot evaluate over an empty team")
        self.model = model
        self._vidx = model.vocab.var_index
        self._values = [s.values for s in model.team]
        self._memo: dict[tuple[int, Formula], bool] = {}

    def evaluate(self, s, phi: Formula) -> bool:
        return self._eval(self.model.index_of(s), phi)

    def _eval(self, i: int, phi: Formula) -> bool:
        key = (i, phi)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        out = self._eval_raw(i, phi)
        self._memo[key] = out
        return out

    def _eval_raw(self, i: int, phi: Formula) -> bool:
        sv = self._values[i]
        vidx = self._vidx
        if isinstance(phi, PredAtom):
            tup = tuple(sv[vidx[a]] for a in phi.args)
            try:
                return tup in self.model.interp[phi.pred]
            except KeyError:
                raise EvaluationError(f"predicate {phi.pred!r} is not interpreted")
        if isinstance(phi, Eq):
            return sv[vidx[phi.left]] == sv[vidx[phi.right]]
        if isinstance(phi, Incl):
            target = tuple(sv[vidx[x]] for x in phi.left)
            cols = [vidx[y] for y in phi.right]
            return any(
                tuple(tv[c] for c in cols) == target for tv in self._values
            )
        if isinstance(phi, Not):
            return not self._eval(i, phi.body)
        if isinstance(phi, And):
            return self._eval(i, phi.left) and self._eval(i, phi.right)
        if isinstance(phi, DQuant):
            cols = [vidx[x] for x in phi.xs]
            for j, tv in enumerate(self._values):
                if all(tv[c] == sv[c] for c in cols):
                    if not self._eval(j, phi.body):
                        return False
            return True
        if isinstance(phi, DAtom):
            cols = [vidx[x] for x in phi.xs]
            yc = vidx[phi.y]
            for tv in self._values:
                if all(tv[c] == sv[c] for c in cols) and tv[yc] != sv[yc]:
                    return False
            return True
        raise TypeError(f"not a formula: {phi!r}")


def evaluate(model: DependenceModel, s, phi: Formula) -> bool:
    """Truth of a formula at one team member.  Fresh memo per query."""
    return Evaluator(model).evaluate(s, phi)


def dependence_closure_at(model: DependenceModel, s, xs: frozenset[str]) -> frozenset[str]:
    """Variables whose value at s is pinned down by agreement on ``xs``."""
    i = model.index_of(s)
    sv = model.team[i].values
    vidx = model.vocab.var_index
    cols = [vidx[x] for x in xs]
    agreeing = [t.values for t in model.team if all(t.values[c] == sv[c] for c in cols)]
    out = []
    for y in model.vocab.variables:
        yc = vidx[y]
        if all(tv[yc] == sv[yc] for tv in agreeing):
            out.append(y)
    return frozenset(out)


def extract_type(model: DependenceModel, s, cl: ClosureSet, ev: Evaluator | None = None) -> PsiType:
    """The set of closure members true at one team member."""
    ev = ev or Evaluator(model)
    i = model.index_of(s)
    bits = 0
    for k, f in enumerate(cl.formulas):
        if ev._eval(i, f):
            bits |= 1 << k
    return PsiType(cl, bits)


def induced_type_model(model: DependenceModel, cl: ClosureSet) -> TypeModel:
    """Distinct types realised across the team, in first-seen order."""
    ev = Evaluator(model)
    seen = []
    for i in range(len(model.team)):
        t = extract_type(model, i, cl, ev)
        if t not in seen:
            seen.append(t)
    return TypeModel(cl, tuple(seen))
