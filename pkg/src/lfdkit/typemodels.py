"""Types over a closure set, type models, and satisfiability.

A type is a subset of a closure set that behaves like the set of
formulas true at one assignment: complements are decided, conjunctions
are decomposed, the dependence quantifier is reflexive, and the
dependence atoms form a relation containing all projections and closed
under composition.  A type model is a collection of types with existential
witnesses inside it and with all member types linked at the empty set.

Satisfiability works by type elimination: enumerate every type over the
closure set, group the candidates into classes linked at the empty set,
and repeatedly delete types whose existential requirements have no
surviving witness in their class.  The input formula is satisfiable
exactly when it belongs to a survivor, and the survivors reachable from
it form a witness type model.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import ResourceCapError
from .syntax import ClosureSet, Formula, Not, closure, print_formula

POSITIVE_CAP = 24


@dataclass(frozen=True)
class PsiType:
    """A member subset of a closure set, stored as a bitset."""

    closure: ClosureSet
    bits: int

    def __contains__(self, phi: Formula) -> bool:
        i = self.closure.index.get(phi)
        return i is not None and self.has(i)

    def has(self, i: int) -> bool:
        return (self.bits >> i) & 1 == 1

    @cached_property
    def indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(len(self.closure)) if self.has(i))

    def formulas(self) -> list[Formula]:
        return [self.closure.formulas[i] for i in self.indices]

    def printed(self) -> list[str]:
        return [print_formula(f) for f in self.formulas()]

    @classmethod
    def from_indices(cls, cl: ClosureSet, indices) -> "PsiType":
        bits = 0
        for i in indices:
            bits |= 1 << i
        return cls(cl, bits)

    @classmethod
    def from_formulas(cls, cl: ClosureSet, formulas) -> "PsiType":
        return cls.from_indices(cl, (cl.index[f] for f in formulas))


def type_dep_closure(sigma: PsiType, xs: frozenset[str]) -> frozenset[str]:
    """Variables the type claims are determined by ``xs``."""
    cl = sigma.closure
    out = set()
    for y in cl.variables:
        i = cl.datom_index.get((xs, y))
        if i is not None and sigma.has(i):
            out.add(y)
    return frozenset(out)


def is_psi_type(sigma: PsiType, cl: ClosureSet | None = None) -> bool:
    return not psi_type_violations(sigma, cl)


def psi_type_violations(sigma: PsiType, cl: ClosureSet | None = None) -> list[str]:
    """Empty list when the bitset is a type; otherwise labelled failures."""
    cl = cl or sigma.closure
    bad: list[str] = []
    # (a) complements are decided
    for i, body in cl.negations:
        if sigma.has(i) == sigma.has(body):
            bad.append(f"(a) {print_formula(cl.formulas[i])}")
    # (b) conjunction membership mirrors the conjuncts
    for i, l, r in cl.conjunctions:
        if sigma.has(i) != (sigma.has(l) and sigma.has(r)):
            bad.append(f"(b) {print_formula(cl.formulas[i])}")
    # (c) the dependence quantifier is reflexive
    for i, _xs, body in cl.dquants:
        if sigma.has(i) and not sigma.has(body):
            bad.append(f"(c) {print_formula(cl.formulas[i])}")
    # (d) projections
    for (xs, y), i in cl.datom_index.items():
        if y in xs and not sigma.has(i):
            bad.append(f"(d) {print_formula(cl.formulas[i])}")
    # (e) composition: fixing X pins down everything any Y inside
    # X's closure pins down
    dep = {xs: type_dep_closure(sigma, xs) for xs in cl.var_subsets}
    for xs in cl.var_subsets:
        for ys in cl.var_subsets:
            if ys <= dep[xs] and not dep[ys] <= dep[xs]:
                bad.append(f"(e) dep({{{ ','.join(sorted(xs)) }}},..) via {{{ ','.join(sorted(ys)) }}}")
    return bad


def _restriction(sigma: PsiType, scope: frozenset[str]) -> int:
    """Bitmask of members whose free variables fall inside ``scope``."""
    cl = sigma.closure
    mask = 0
    for i, fv in enumerate(cl.free_sets):
        if fv <= scope and sigma.has(i):
            mask |= 1 << i
    return mask


def type_sim(sigma: PsiType, delta: PsiType, xs: frozenset[str]) -> bool:
    """Linkage at ``xs``: the two types agree on every member formula
    whose free variables lie inside sigma's dependence closure of ``xs``."""
    scope = type_dep_closure(sigma, xs)
    return _restriction(sigma, scope) == _restriction(delta, scope)


@dataclass(frozen=True)
class TypeModel:
    closure: ClosureSet
    types: tuple[PsiType, ...]

    def __len__(self) -> int:
        return len(self.types)


@dataclass
class Violation:
    condition: str
    message: str
    witness: object = None


@dataclass
class ValidationReport:
    violations: list[Violation]
    warnings: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, condition: str, message: str, witness: object = None) -> None:
        self.violations.append(Violation(condition, message, witness))

    def warn(self, message: str) -> None:
        self.warnings.append(message)

    def summary(self) -> str:
        if self.ok:
            return "ok" + (f" ({len(self.warnings)} warnings)" if self.warnings else "")
        return "; ".join(f"[{v.condition}] {v.message}" for v in self.violations)


def fresh_report() -> ValidationReport:
    return ValidationReport([], [])


def requirements(sigma: PsiType) -> list[tuple[frozenset[str], int]]:
    """Existential obligations of a type.

    Each quantifier formula absent from the type is a claim that some
    linked type refutes the body: pairs (xs, body index) where the
    witness must not contain the body.
    """
    cl = sigma.closure
    return [(xs, body) for i, xs, body in cl.dquants if not sigma.has(i)]


def validate_type_model(tm: TypeModel) -> ValidationReport:
    report = fresh_report()
    if not tm.types:
        report.add("nonempty", "a type model needs at least one type")
        return report
    for n, sigma in enumerate(tm.types):
        for v in psi_type_violations(sigma):
            report.add("type", f"type {n}: {v}")
    for n, sigma in enumerate(tm.types):
        for xs, body in requirements(sigma):
            if not any(
                type_sim(sigma, delta, xs) and not delta.has(body)
                for delta in tm.types
            ):
                report.add(
                    "witness",
                    f"type {n} lacks a witness refuting "
                    f"{print_formula(tm.closure.formulas[body])} at {{{','.join(sorted(xs))}}}",
                )
    empty = frozenset()
    for n, sigma in enumerate(tm.types):
        for m, delta in enumerate(tm.types):
            if not type_sim(sigma, delta, empty):
                report.add("universal", f"types {n} and {m} are not linked at {{}}")
    return report


def enumerate_psi_types(cl: ClosureSet, cap: int = POSITIVE_CAP) -> list[PsiType]:
    """Every type over the closure set, in a deterministic order.

    Enumeration ranges over the members that are not negations; the rest
    are forced by complementation.  Refuses when more than ``cap``
    positive members would make the sweep unreasonable.
    """
    positives = cl.positives
    if len(positives) > cap:
        raise ResourceCapError(
            f"{len(positives)} positive members exceed the enumeration cap of {cap}"
        )
    # fill order: negations must come after their bodies
    fill = sorted(
        ((i, body) for i, body in cl.negations),
        key=lambda pair: _not_depth(cl, pair[0]),
    )
    out = []
    for mask in range(1 << len(positives)):
        bits = 0
        for k, i in enumerate(positives):
            if (mask >> k) & 1:
                bits |= 1 << i
        for i, body in fill:
            if not (bits >> body) & 1:
                bits |= 1 << i
        cand = PsiType(cl, bits)
        if not psi_type_violations(cand, cl):
            out.append(cand)
    return out


def _not_depth(cl: ClosureSet, i: int) -> int:
    d = 0
    f = cl.formulas[i]
    while isinstance(f, Not):
        d += 1
        f = f.body
    return d


def _empty_class_key(sigma: PsiType):
    scope = type_dep_closure(sigma, frozenset())
    return (tuple(sorted(scope)), _restriction(sigma, scope))


@dataclass
class SatResult:
    status: str  # "SAT" | "UNSAT"
    closure: ClosureSet
    model: TypeModel | None = None
    type_index: int | None = None

    @property
    def satisfiable(self) -> bool:
        return self.status == "SAT"


def satisfiable(psi: Formula, cap: int = POSITIVE_CAP) -> SatResult:
    """Decide satisfiability of a core-language formula by type elimination.

    On success the result carries a witness type model: the survivors
    reachable from a type containing the formula, so certificates stay
    small enough to unravel.
    """
    cl = closure(psi)
    candidates = enumerate_psi_types(cl, cap)
    target = cl.index[psi]

    classes: dict[object, list[PsiType]] = {}
    for t in candidates:
        classes.setdefault(_empty_class_key(t), []).append(t)

    for key in sorted(classes, key=repr):
        survivors = _eliminate(classes[key])
        for sigma in survivors:
            if sigma.has(target):
                model_types = _generated_submodel(sigma, survivors)
                tm = TypeModel(cl, tuple(model_types))
                report = validate_type_model(tm)
                if not report.ok:
                    raise AssertionError(
                        f"internal: witness model fails validation: {report.summary()}"
                    )
                return SatResult("SAT", cl, tm, model_types.index(sigma))
    return SatResult("UNSAT", cl)


def _eliminate(types: list[PsiType]) -> list[PsiType]:
    alive = list(types)
    while True:
        keep = []
        for sigma in alive:
            ok = all(
                any(
                    type_sim(sigma, delta, xs) and not delta.has(body)
                    for delta in alive
                )
                for xs, body in requirements(sigma)
            )
            if ok:
                keep.append(sigma)
        if len(keep) == len(alive):
            return keep
        alive = keep


def _generated_submodel(root: PsiType, survivors: list[PsiType]) -> list[PsiType]:
    chosen = [root]
    frontier = [root]
    while frontier:
        sigma = frontier.pop(0)
        for xs, body in requirements(sigma):
            if any(type_sim(sigma, d, xs) and not d.has(body) for d in chosen):
                continue
            for delta in survivors:
                if type_sim(sigma, delta, xs) and not delta.has(body):
                    chosen.append(delta)
                    frontier.append(delta)
                    break
    return sorted(chosen, key=lambda t: t.bits)
