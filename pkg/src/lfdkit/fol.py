"""First-order translation and an independent Tarskian evaluator.

Team-relative truth compiles into ordinary first-order truth over the
structure whose extra relation holds exactly the team's value tuples.
The dependence quantifier becomes a guarded universal over the variables
it does not fix; a dependence atom becomes a two-copy functionality
statement using primed variable copies; inclusion atoms quantify a full
primed copy of the team relation.

``fo_eval`` is deliberately plain model theory: quantifiers expand over
the whole domain.  It shares nothing with the team-relative evaluator,
so agreement between the two routes is evidence for both.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Mapping

from .errors import EvaluationError, VocabularyError
from .semantics import Assignment, DependenceModel
from .syntax import (
    And,
    DAtom,
    DQuant,
    Eq,
    Formula,
    Incl,
    Not,
    PredAtom,
    PRIME,
    Vocabulary,
)


class FOFormula:
    __slots__ = ()


@dataclass(frozen=True)
class FOPred(FOFormula):
    pred: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class FOTeam(FOFormula):
    """The distinguished team relation applied to a variable tuple."""

    args: tuple[str, ...]


@dataclass(frozen=True)
class FOEq(FOFormula):
    left: str
    right: str


@dataclass(frozen=True)
class FONot(FOFormula):
    body: FOFormula


@dataclass(frozen=True)
class FOAnd(FOFormula):
    left: FOFormula
    right: FOFormula


@dataclass(frozen=True)
class FOImp(FOFormula):
    left: FOFormula
    right: FOFormula


@dataclass(frozen=True)
class FOForall(FOFormula):
    vars: tuple[str, ...]
    body: FOFormula


@dataclass(frozen=True)
class FOExists(FOFormula):
    vars: tuple[str, ...]
    body: FOFormula


def prime(v: str) -> str:
    return v + PRIME


def fo_free_vars(phi: FOFormula) -> frozenset[str]:
    if isinstance(phi, (FOPred, FOTeam)):
        return frozenset(phi.args)
    if isinstance(phi, FOEq):
        return frozenset((phi.left, phi.right))
    if isinstance(phi, FONot):
        return fo_free_vars(phi.body)
    if isinstance(phi, (FOAnd, FOImp)):
        return fo_free_vars(phi.left) | fo_free_vars(phi.right)
    if isinstance(phi, (FOForall, FOExists)):
        return fo_free_vars(phi.body) - frozenset(phi.vars)
    raise TypeError(f"not a first-order formula: {phi!r}")


def _fo_and(parts: list[FOFormula]) -> FOFormula:
    acc = parts[0]
    for p in parts[1:]:
        acc = FOAnd(acc, p)
    return acc


def translate(phi: Formula, vocab: Vocabulary) -> FOFormula:
    """Compile a team-relative formula into first-order form.

    Free variables of the output stay within the unprimed supply, so
    truth does not depend on how the primed copies are valued.
    """
    vs = vocab.variables
    team_atom = FOTeam(vs)

    def tr(f: Formula) -> FOFormula:
        if isinstance(f, PredAtom):
            return FOPred(f.pred, f.args)
        if isinstance(f, Eq):
            return FOEq(f.left, f.right)
        if isinstance(f, Not):
            return FONot(tr(f.body))
        if isinstance(f, And):
            return FOAnd(tr(f.left), tr(f.right))
        if isinstance(f, DQuant):
            zs = tuple(v for v in vs if v not in f.xs)
            body = FOImp(team_atom, tr(f.body))
            return FOForall(zs, body) if zs else body
        if isinstance(f, DAtom):
            if f.y in f.xs:
                return _fo_and([FOEq(x, x) for x in vocab.sort_vars(f.xs)])
            zs = tuple(v for v in vs if v not in f.xs)
            zsp = tuple(prime(z) for z in zs)
            copy_args = tuple(prime(v) if v in zs else v for v in vs)
            guard = FOAnd(team_atom, FOTeam(copy_args))
            body = FOImp(guard, FOEq(f.y, prime(f.y)))
            return FOForall(zs + zsp, body)
        if isinstance(f, Incl):
            vsp = tuple(prime(v) for v in vs)
            eqs = [
                FOEq(x, prime(y)) for x, y in zip(f.left, f.right)
            ]
            return FOExists(vsp, _fo_and([FOTeam(vsp)] + eqs))
        raise TypeError(f"not a formula: {f!r}")

    return tr(phi)


@dataclass(frozen=True, eq=False)
class FOStructure:
    """A finite relational structure, optionally carrying a team relation."""

    domain: tuple
    relations: Mapping[str, frozenset]
    team: frozenset | None = None
    variables: tuple[str, ...] | None = None

    @cached_property
    def relation_names(self) -> tuple[str, ...]:
        return tuple(sorted(self.relations))


def encode_structure(m: DependenceModel) -> FOStructure:
    """The structure whose team relation holds the team's value tuples."""
    team = frozenset(s.values for s in m.team)
    return FOStructure(
        domain=m.domain,
        relations={p: frozenset(ts) for p, ts in m.interp.items()},
        team=team,
        variables=m.vocab.variables,
    )


def decode_structure(s: FOStructure) -> DependenceModel:
    """Inverse of ``encode_structure``; needs the variable tuple present."""
    if s.team is None or s.variables is None:
        raise VocabularyError("structure has no team relation or variable tuple")
    arities = {}
    for p, ts in s.relations.items():
        lens = {len(t) for t in ts}
        if len(lens) > 1:
            raise VocabularyError(f"relation {p!r} holds tuples of mixed arity")
        arities[p] = lens.pop() if lens else 0
    vocab = Vocabulary.make(s.variables, arities)
    team = tuple(
        Assignment(vocab.variables, values) for values in sorted(s.team, key=repr)
    )
    return DependenceModel(vocab, s.domain, dict(s.relations), team)


def fo_eval(s: FOStructure, alpha: Mapping, phi: FOFormula) -> bool:
    """Tarskian truth by exhaustive quantifier expansion.

    The formula is compiled once into nested closures over an integer
    environment; quantifier blocks iterate the full cartesian power of
    the domain.
    """
    names: list[str] = []
    slot: dict[str, int] = {}

    def ensure(v: str) -> int:
        if v not in slot:
            slot[v] = len(names)
            names.append(v)
        return slot[v]

    def compile_(f: FOFormula):
        if isinstance(f, FOPred):
            cols = tuple(ensure(a) for a in f.args)
            rel = s.relations.get(f.pred)
            if rel is None:
                raise EvaluationError(f"relation {f.pred!r} is not interpreted")
            return lambda env: tuple(env[c] for c in cols) in rel
        if isinstance(f, FOTeam):
            if s.team is None:
                raise EvaluationError("structure has no team relation")
            cols = tuple(ensure(a) for a in f.args)
            team = s.team
            return lambda env: tuple(env[c] for c in cols) in team
        if isinstance(f, FOEq):
            a, b = ensure(f.left), ensure(f.right)
            return lambda env: env[a] == env[b]
        if isinstance(f, FONot):
            sub = compile_(f.body)
            return lambda env: not sub(env)
        if isinstance(f, FOAnd):
            l, r = compile_(f.left), compile_(f.right)
            return lambda env: l(env) and r(env)
        if isinstance(f, FOImp):
            l, r = compile_(f.left), compile_(f.right)
            return lambda env: (not l(env)) or r(env)
        if isinstance(f, (FOForall, FOExists)):
            cols = tuple(ensure(v) for v in f.vars)
            sub = compile_(f.body)
            domain = s.domain
            want_all = isinstance(f, FOForall)

            def run(env, cols=cols, sub=sub, want_all=want_all):
                # slots are shared by name, so free occurrences outside
                # this block must see their old values afterwards
                saved = [env[c] for c in cols]
                try:
                    for tup in product(domain, repeat=len(cols)):
                        for c, o in zip(cols, tup):
                            env[c] = o
                        if sub(env) != want_all:
                            return not want_all
                    return want_all
                finally:
                    for c, v in zip(cols, saved):
                        env[c] = v

            return run
        raise TypeError(f"not a first-order formula: {f!r}")

    fn = compile_(phi)
    env = [None] * len(names)
    missing = [v for v in fo_free_vars(phi) if v not in alpha]
    if missing:
        raise EvaluationError(f"unassigned free variables: {sorted(missing)}")
    for v, c in slot.items():
        if v in alpha:
            env[c] = alpha[v]
    return fn(env)


def print_fo(phi: FOFormula, team_name: str = "A") -> str:
    if isinstance(phi, FOPred):
        return f"{phi.pred}({','.join(phi.args)})"
    if isinstance(phi, FOTeam):
        return f"{team_name}({','.join(phi.args)})"
    if isinstance(phi, FOEq):
        return f"{phi.left} = {phi.right}"
    if isinstance(phi, FONot):
        return f"~{_wrap_fo(phi.body, team_name)}"
    if isinstance(phi, FOAnd):
        return f"({print_fo(phi.left, team_name)} & {print_fo(phi.right, team_name)})"
    if isinstance(phi, FOImp):
        return f"({print_fo(phi.left, team_name)} -> {print_fo(phi.right, team_name)})"
    if isinstance(phi, FOForall):
        return f"forall {', '.join(phi.vars)}. {_wrap_fo(phi.body, team_name)}"
    if isinstance(phi, FOExists):
        return f"exists {', '.join(phi.vars)}. {_wrap_fo(phi.body, team_name)}"
    raise TypeError(f"not a first-order formula: {phi!r}")


def _wrap_fo(phi: FOFormula, team_name: str) -> str:
    s = print_fo(phi, team_name)
    if isinstance(phi, (FOAnd, FOImp)) or s.startswith("("):
        return s
    return f"({s})"


def print_tptp(phi: FOFormula) -> str:
    """Best-effort TPTP-style text: variables upper-cased, team as ``team``."""

    def var(v: str) -> str:
        return "V" + v.replace(PRIME, "p").upper()

    def go(f: FOFormula) -> str:
        if isinstance(f, FOPred):
            return f"{f.pred.lower()}({','.join(var(a) for a in f.args)})"
        if isinstance(f, FOTeam):
            return f"team({','.join(var(a) for a in f.args)})"
        if isinstance(f, FOEq):
            return f"({var(f.left)} = {var(f.right)})"
        if isinstance(f, FONot):
            return f"~({go(f.body)})"
        if isinstance(f, FOAnd):
            return f"({go(f.left)} & {go(f.right)})"
        if isinstance(f, FOImp):
            return f"({go(f.left)} => {go(f.right)})"
        if isinstance(f, FOForall):
            vs = ",".join(var(v) for v in f.vars)
            return f"(! [{vs}] : {go(f.body)})"
        if isinstance(f, FOExists):
            vs = ",".join(var(v) for v in f.vars)
            return f"(? [{vs}] : {go(f.body)})"
        raise TypeError(f"not a first-order formula: {f!r}")

    return go(phi)
