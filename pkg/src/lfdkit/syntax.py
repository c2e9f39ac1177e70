"""Vocabulary, formula AST, printer, and closure sets.

Formulas are immutable trees over a relational vocabulary with a fixed,
finite variable supply.  The core connectives are predicate atoms,
negation, conjunction, the dependence quantifier ``D{X}`` and dependence
atoms ``dep({X},y)``.  Equality atoms ``x = y`` and inclusion atoms
``inc((..),(..))`` belong to the extended languages: they parse, print
and evaluate, but the closure-set and type machinery refuses them.

A closure set for a seed formula collects the seed, every dependence
atom over the seed's occurring variables, all subformulas, and one round
of negations (formulas that already are negations are left alone).  The
resulting finite, indexed formula list is what types and the
satisfiability procedure work over.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import UnsupportedAtomError, VocabularyError

PRIME = "'"


@dataclass(frozen=True)
class Vocabulary:
    """A finite variable supply plus predicate symbols with arities."""

    variables: tuple[str, ...]
    predicates: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise VocabularyError("duplicate variable names")
        names = [p for p, _ in self.predicates]
        if len(set(names)) != len(names):
            raise VocabularyError("duplicate predicate names")
        for sym in list(self.variables) + names:
            if PRIME in sym:
                # primed copies are reserved for the first-order translation
                raise VocabularyError(f"symbol {sym!r} uses the reserved prime suffix")
        for p, ar in self.predicates:
            if ar < 0:
                raise VocabularyError(f"negative arity for predicate {p!r}")

    @classmethod
    def make(cls, variables: Iterable[str], predicates) -> "Vocabulary":
        if hasattr(predicates, "items"):
            preds = tuple(sorted(predicates.items()))
        else:
            preds = tuple(sorted(predicates))
        return cls(tuple(variables), preds)

    @cached_property
    def arity(self) -> dict[str, int]:
        return dict(self.predicates)

    @cached_property
    def var_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.variables)}

    def sort_vars(self, xs: Iterable[str]) -> tuple[str, ...]:
        """Order a variable set by this vocabulary's enumeration."""
        return tuple(sorted(xs, key=self.var_index.__getitem__))


class Formula:
    """Base class for formula nodes; all subclasses are frozen dataclasses."""

    __slots__ = ()


@dataclass(frozen=True)
class PredAtom(Formula):
    pred: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Incl(Formula):
    left: tuple[str, ...]
    right: tuple[str, ...]


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class DQuant(Formula):
    """The dependence quantifier: truth at s requires truth at every team
    member agreeing with s on ``xs``."""

    xs: frozenset[str]
    body: Formula


@dataclass(frozen=True)
class DAtom(Formula):
    """``dep({xs},y)``: the values of ``xs`` determine the value of ``y``."""

    xs: frozenset[str]
    y: str


def neg(phi: Formula) -> Formula:
    """Negate, collapsing a double negation.

    Used by the parser's derived connectives so that sugar such as
    ``E{X} !φ`` does not inflate closure sets with ``!!φ`` chains.
    Explicit ``!`` in the input is kept verbatim.
    """
    return phi.body if isinstance(phi, Not) else Not(phi)


def conj(parts: Iterable[Formula]) -> Formula:
    """Left-fold a non-empty sequence into nested conjunctions."""
    parts = list(parts)
    if not parts:
        raise ValueError("empty conjunction")
    acc = parts[0]
    for p in parts[1:]:
        acc = And(acc, p)
    return acc


def free_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, PredAtom):
        return frozenset(phi.args)
    if isinstance(phi, Eq):
        return frozenset((phi.left, phi.right))
    if isinstance(phi, Incl):
        return frozenset(phi.left) | frozenset(phi.right)
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, And):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, (DQuant, DAtom)):
        # the quantifier and the dependence atom both bind everything
        # except the variables they fix
        return frozenset(phi.xs)
    raise TypeError(f"not a formula: {phi!r}")


def occurring_vars(phi: Formula) -> frozenset[str]:
    """All variables appearing anywhere in the formula."""
    if isinstance(phi, PredAtom):
        return frozenset(phi.args)
    if isinstance(phi, Eq):
        return frozenset((phi.left, phi.right))
    if isinstance(phi, Incl):
        return frozenset(phi.left) | frozenset(phi.right)
    if isinstance(phi, Not):
        return occurring_vars(phi.body)
    if isinstance(phi, And):
        return occurring_vars(phi.left) | occurring_vars(phi.right)
    if isinstance(phi, DQuant):
        return phi.xs | occurring_vars(phi.body)
    if isinstance(phi, DAtom):
        return phi.xs | {phi.y}
    raise TypeError(f"not a formula: {phi!r}")


def occurring_preds(phi: Formula) -> dict[str, int]:
    """Predicate symbols used in the formula, with their observed arities."""
    out: dict[str, int] = {}

    def walk(f: Formula):
        if isinstance(f, PredAtom):
            seen = out.get(f.pred)
            if seen is not None and seen != len(f.args):
                raise VocabularyError(
                    f"predicate {f.pred!r} used with arities {seen} and {len(f.args)}"
                )
            out[f.pred] = len(f.args)
        elif isinstance(f, Not):
            walk(f.body)
        elif isinstance(f, And):
            walk(f.left)
            walk(f.right)
        elif isinstance(f, DQuant):
            walk(f.body)

    walk(phi)
    return out


def infer_vocabulary(phi: Formula) -> Vocabulary:
    return Vocabulary.make(sorted(occurring_vars(phi)), occurring_preds(phi))


def modal_depth(phi: Formula) -> int:
    """Nesting depth of dependence operators.

    Dependence atoms count one step: their truth needs one round of
    lookups across the team, matching the reach they have in truth
    lemmas for depth-bounded models.
    """
    if isinstance(phi, (PredAtom, Eq, Incl)):
        return 0
    if isinstance(phi, DAtom):
        return 1
    if isinstance(phi, Not):
        return modal_depth(phi.body)
    if isinstance(phi, And):
        return max(modal_depth(phi.left), modal_depth(phi.right))
    if isinstance(phi, DQuant):
        return 1 + modal_depth(phi.body)
    raise TypeError(f"not a formula: {phi!r}")


def subformulas(phi: Formula) -> Iterator[Formula]:
    """Direct subformulas (one level)."""
    if isinstance(phi, Not):
        yield phi.body
    elif isinstance(phi, And):
        yield phi.left
        yield phi.right
    elif isinstance(phi, DQuant):
        yield phi.body


def _var_list(xs: Iterable[str]) -> str:
    return ",".join(sorted(xs))


def print_formula(phi: Formula) -> str:
    """Canonical ASCII form; re-parses to a structurally equal formula."""
    if isinstance(phi, PredAtom):
        return f"{phi.pred}({','.join(phi.args)})"
    if isinstance(phi, Eq):
        return f"{phi.left} = {phi.right}"
    if isinstance(phi, Incl):
        return f"inc(({','.join(phi.left)}),({','.join(phi.right)}))"
    if isinstance(phi, DAtom):
        return f"dep({{{_var_list(phi.xs)}}},{phi.y})"
    if isinstance(phi, Not):
        return "!" + _wrap(phi.body)
    if isinstance(phi, DQuant):
        return f"D{{{_var_list(phi.xs)}}} " + _wrap(phi.body)
    if isinstance(phi, And):
        return f"{print_formula(phi.left)} & {_wrap(phi.right)}"
    raise TypeError(f"not a formula: {phi!r}")


def _wrap(phi: Formula) -> str:
    # conjunction is the only construct binding looser than the unary level
    s = print_formula(phi)
    return f"({s})" if isinstance(phi, And) else s


def is_core(phi: Formula) -> bool:
    """True when the formula avoids equality and inclusion atoms."""
    if isinstance(phi, (Eq, Incl)):
        return False
    return all(is_core(sub) for sub in subformulas(phi))


def subsets_of(vars_sorted: tuple[str, ...]) -> list[frozenset[str]]:
    """All subsets, smallest first, in a deterministic order."""
    out = [frozenset()]
    for v in vars_sorted:
        out += [s | {v} for s in out]
    return sorted(out, key=lambda s: (len(s), tuple(sorted(s))))


@dataclass(frozen=True)
class ClosureSet:
    """An indexed closure set for one seed formula.

    Invariant: every member that is not itself a negation has its
    negation in the set, and every negation has its body in the set, so
    complement lookup is total.
    """

    formulas: tuple[Formula, ...]
    origin: Formula
    variables: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.formulas)

    def __contains__(self, phi: Formula) -> bool:
        return phi in self.index

    @cached_property
    def index(self) -> dict[Formula, int]:
        return {f: i for i, f in enumerate(self.formulas)}

    @cached_property
    def free_sets(self) -> tuple[frozenset[str], ...]:
        return tuple(free_vars(f) for f in self.formulas)

    @cached_property
    def positives(self) -> tuple[int, ...]:
        """Indices of members that are not explicit negations."""
        return tuple(i for i, f in enumerate(self.formulas) if not isinstance(f, Not))

    @cached_property
    def negations(self) -> tuple[tuple[int, int], ...]:
        """(index of Not-formula, index of its body) pairs."""
        return tuple(
            (i, self.index[f.body])
            for i, f in enumerate(self.formulas)
            if isinstance(f, Not)
        )

    @cached_property
    def conjunctions(self) -> tuple[tuple[int, int, int], ...]:
        return tuple(
            (i, self.index[f.left], self.index[f.right])
            for i, f in enumerate(self.formulas)
            if isinstance(f, And)
        )

    @cached_property
    def dquants(self) -> tuple[tuple[int, frozenset[str], int], ...]:
        return tuple(
            (i, f.xs, self.index[f.body])
            for i, f in enumerate(self.formulas)
            if isinstance(f, DQuant)
        )

    @cached_property
    def datom_index(self) -> dict[tuple[frozenset[str], str], int]:
        return {
            (f.xs, f.y): i
            for i, f in enumerate(self.formulas)
            if isinstance(f, DAtom)
        }

    @cached_property
    def var_subsets(self) -> tuple[frozenset[str], ...]:
        return tuple(subsets_of(self.variables))

    def complement(self, i: int) -> int:
        """Index of the complementary formula (strip or add one negation)."""
        f = self.formulas[i]
        if isinstance(f, Not):
            return self.index[f.body]
        return self.index[Not(f)]

    def datom(self, xs: frozenset[str], y: str) -> int:
        return self.datom_index[(xs, y)]

    def printed(self) -> list[str]:
        return [print_formula(f) for f in self.formulas]


def closure(psi: Formula) -> ClosureSet:
    """Build the closure set of a single core-language seed formula."""
    if not is_core(psi):
        raise UnsupportedAtomError(
            "closure sets are defined for the core language only "
            "(no equality or inclusion atoms)"
        )
    relevant = tuple(sorted(occurring_vars(psi)))
    seed: list[Formula] = [psi]
    for xs in subsets_of(relevant):
        for y in relevant:
            seed.append(DAtom(xs, y))

    ordered: list[Formula] = []
    seen: set[Formula] = set()
    queue = deque(seed)
    while queue:
        f = queue.popleft()
        if f in seen:
            continue
        seen.add(f)
        ordered.append(f)
        queue.extend(subformulas(f))

    for f in list(ordered):
        if not isinstance(f, Not):
            nf = Not(f)
            if nf not in seen:
                seen.add(nf)
                ordered.append(nf)

    return ClosureSet(tuple(ordered), psi, relevant)
