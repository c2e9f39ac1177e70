"""Greatest-fixpoint bisimilarity checkers with cost instrumentation.

Three notions over a shared refinement engine:

* ``dependence``: atomic harmony on predicate atoms, plus the requirement
  that every maximal agreement set between a team member and the current
  one is dependence-closed on the other side, plus back-and-forth
  matching that transfers agreement.
* ``standard``: atomic harmony extended to every dependence atom (so the
  full closure table over all variable subsets is computed up front),
  with plain back-and-forth agreement transfer.
* ``inclusion``: back-and-forth transfer of every value coincidence
  s(x) = t(y), including across distinct variables.

The first two accept the same model pairs; they differ in how many
dependence closures they must compute, which is what ``stats`` records.
Closure computations are deduplicated per (side, assignment, scope), so
the counter measures distinct model-checking work, not cache hits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .errors import VocabularyError
from .semantics import DependenceModel, dependence_closure_at
from .typemodels import ValidationReport, fresh_report
from .syntax import Formula

KINDS = ("dependence", "standard", "inclusion")


@dataclass
class BisimStats:
    closure_computations: int = 0
    eval_calls: int = 0
    refinement_rounds: int = 0

    def as_dict(self) -> dict:
        return {
            "closureComputations": self.closure_computations,
            "evalCalls": self.eval_calls,
            "refinementRounds": self.refinement_rounds,
        }


@dataclass
class BisimRelation:
    kind: str
    pairs: frozenset[tuple[int, int]]
    stats: BisimStats = field(default_factory=BisimStats)

    def relates(self, i: int, j: int) -> bool:
        return (i, j) in self.pairs

    def left_indices(self) -> frozenset[int]:
        return frozenset(i for i, _ in self.pairs)

    def right_indices(self) -> frozenset[int]:
        return frozenset(j for _, j in self.pairs)


def _require_shared_vocabulary(m: DependenceModel, m2: DependenceModel) -> None:
    if m.vocab != m2.vocab:
        raise VocabularyError("bisimilarity needs a shared vocabulary")


def _atom_profile(m: DependenceModel, stats: BisimStats, eq_atoms: bool) -> list[tuple]:
    """Truth values of every predicate atom (and x=y atom) per team member."""
    vocab = m.vocab
    atoms = []
    for pred, arity in sorted(vocab.predicates):
        for args in product(vocab.variables, repeat=arity):
            atoms.append((pred, args))
    eq_pairs = []
    if eq_atoms:
        vs = vocab.variables
        eq_pairs = [(a, b) for k, a in enumerate(vs) for b in vs[k + 1:]]
    vidx = vocab.var_index
    profiles = []
    for s in m.team:
        row = []
        for pred, args in atoms:
            stats.eval_calls += 1
            row.append(tuple(s.values[vidx[a]] for a in args) in m.interp[pred])
        for a, b in eq_pairs:
            stats.eval_calls += 1
            row.append(s.values[vidx[a]] == s.values[vidx[b]])
        profiles.append(tuple(row))
    return profiles


def _agreement_sets(m: DependenceModel) -> list[list[frozenset[str]]]:
    """ag[i][j] = the maximal set of variables where members i and j agree."""
    vs = m.vocab.variables
    out = []
    for s in m.team:
        row = []
        for t in m.team:
            row.append(
                frozenset(v for v, a, b in zip(vs, s.values, t.values) if a == b)
            )
        out.append(row)
    return out


class _ClosureCache:
    """Deduplicating front end to dependence_closure_at; counts misses."""

    def __init__(self, stats: BisimStats):
        self.stats = stats
        self._done: dict[tuple, frozenset[str]] = {}

    def get(self, side: int, m: DependenceModel, i: int, xs: frozenset[str]) -> frozenset[str]:
        key = (side, i, xs)
        got = self._done.get(key)
        if got is None:
            self.stats.closure_computations += 1
            got = dependence_closure_at(m, i, xs)
            self._done[key] = got
        return got


def _refine(
    pairs: set[tuple[int, int]],
    match_forth,
    match_back,
    stats: BisimStats,
) -> frozenset[tuple[int, int]]:
    """Bulk-synchronous pair elimination down to the greatest fixpoint."""
    while True:
        stats.refinement_rounds += 1
        doomed = [
            p for p in pairs if not (match_forth(p, pairs) and match_back(p, pairs))
        ]
        if not doomed:
            return frozenset(pairs)
        pairs.difference_update(doomed)
        if not pairs:
            return frozenset()


def check_dependence_bisim(
    m: DependenceModel, m2: DependenceModel, eq_atoms: bool = False
) -> BisimRelation | None:
    """Largest dependence bisimulation between two models, if non-empty.

    Candidate pairs must agree on all atoms, and every maximal agreement
    set on either side must be dependence-closed at the partner
    assignment; refinement then enforces the matching clauses.  Closures
    are only ever requested for maximal agreement sets.
    """
    _require_shared_vocabulary(m, m2)
    stats = BisimStats()
    prof1 = _atom_profile(m, stats, eq_atoms)
    prof2 = _atom_profile(m2, stats, eq_atoms)
    ag1 = _agreement_sets(m)
    ag2 = _agreement_sets(m2)
    closures = _ClosureCache(stats)

    n1, n2 = len(m.team), len(m2.team)
    pairs = set()
    for i in range(n1):
        for j in range(n2):
            if prof1[i] != prof2[j]:
                continue
            if any(
                closures.get(1, m2, j, ag1[i][t]) != ag1[i][t] for t in range(n1)
            ):
                continue
            if any(
                closures.get(0, m, i, ag2[j][t]) != ag2[j][t] for t in range(n2)
            ):
                continue
            pairs.add((i, j))

    def forth(p, live):
        i, j = p
        return all(
            any((t, t2) in live and ag1[i][t] <= ag2[j][t2] for t2 in range(n2))
            for t in range(n1)
        )

    def back(p, live):
        i, j = p
        return all(
            any((t, t2) in live and ag2[j][t2] <= ag1[i][t] for t in range(n1))
            for t2 in range(n2)
        )

    result = _refine(pairs, forth, back, stats)
    if not result:
        return None
    return BisimRelation("dependence", result, stats)


def check_standard_bisim(
    m: DependenceModel, m2: DependenceModel, eq_atoms: bool = False
) -> BisimRelation | None:
    """Variant treating dependence atoms as ordinary atoms.

    Harmony then needs the dependence closure of every variable subset
    at every team member of both models, which is the cost this checker
    pays and the dependence checker avoids.
    """
    _require_shared_vocabulary(m, m2)
    stats = BisimStats()
    prof1 = _atom_profile(m, stats, eq_atoms)
    prof2 = _atom_profile(m2, stats, eq_atoms)
    ag1 = _agreement_sets(m)
    ag2 = _agreement_sets(m2)
    closures = _ClosureCache(stats)

    scopes = [frozenset(xs) for xs in _all_subsets(m.vocab.variables)]
    table1 = [
        {xs: closures.get(0, m, i, xs) for xs in scopes} for i in range(len(m.team))
    ]
    table2 = [
        {xs: closures.get(1, m2, j, xs) for xs in scopes} for j in range(len(m2.team))
    ]

    n1, n2 = len(m.team), len(m2.team)
    pairs = {
        (i, j)
        for i in range(n1)
        for j in range(n2)
        if prof1[i] == prof2[j] and table1[i] == table2[j]
    }

    def forth(p, live):
        i, j = p
        return all(
            any((t, t2) in live and ag1[i][t] <= ag2[j][t2] for t2 in range(n2))
            for t in range(n1)
        )

    def back(p, live):
        i, j = p
        return all(
            any((t, t2) in live and ag2[j][t2] <= ag1[i][t] for t in range(n1))
            for t2 in range(n2)
        )

    result = _refine(pairs, forth, back, stats)
    if not result:
        return None
    return BisimRelation("standard", result, stats)


def check_inclusion_bisim(
    m: DependenceModel, m2: DependenceModel
) -> BisimRelation | None:
    """Largest inclusion bisimulation, transferring all value coincidences."""
    _require_shared_vocabulary(m, m2)
    stats = BisimStats()
    prof1 = _atom_profile(m, stats, eq_atoms=False)
    prof2 = _atom_profile(m2, stats, eq_atoms=False)
    pat1 = _coincidence_patterns(m)
    pat2 = _coincidence_patterns(m2)

    n1, n2 = len(m.team), len(m2.team)
    pairs = {
        (i, j) for i in range(n1) for j in range(n2) if prof1[i] == prof2[j]
    }

    def forth(p, live):
        i, j = p
        return all(
            any((t, t2) in live and pat1[i][t] <= pat2[j][t2] for t2 in range(n2))
            for t in range(n1)
        )

    def back(p, live):
        i, j = p
        return all(
            any((t, t2) in live and pat2[j][t2] <= pat1[i][t] for t in range(n1))
            for t2 in range(n2)
        )

    result = _refine(pairs, forth, back, stats)
    if not result:
        return None
    return BisimRelation("inclusion", result, stats)


def _coincidence_patterns(m: DependenceModel) -> list[list[frozenset]]:
    """pat[i][j] = ordered variable pairs (x,y) with s_i(x) = s_j(y)."""
    vs = m.vocab.variables
    vidx = m.vocab.var_index
    out = []
    for s in m.team:
        row = []
        for t in m.team:
            row.append(
                frozenset(
                    (x, y)
                    for x in vs
                    for y in vs
                    if s.values[vidx[x]] == t.values[vidx[y]]
                )
            )
        out.append(row)
    return out


def _all_subsets(vs: tuple[str, ...]):
    for r in range(len(vs) + 1):
        yield from combinations(vs, r)


def verify_bisimulation(
    m: DependenceModel,
    m2: DependenceModel,
    z: BisimRelation,
    eq_atoms: bool = False,
) -> ValidationReport:
    """Clause-by-clause audit of a claimed bisimulation."""
    _require_shared_vocabulary(m, m2)
    report = fresh_report()
    stats = BisimStats()
    if not z.pairs:
        report.add("nonempty", "the relation is empty", None)
        return report
    prof1 = _atom_profile(m, stats, eq_atoms)
    prof2 = _atom_profile(m2, stats, eq_atoms)
    ag1 = _agreement_sets(m)
    ag2 = _agreement_sets(m2)
    pat1 = pat2 = None
    if z.kind == "inclusion":
        pat1 = _coincidence_patterns(m)
        pat2 = _coincidence_patterns(m2)
    n1, n2 = len(m.team), len(m2.team)

    for i, j in sorted(z.pairs):
        tag = f"({i},{j})"
        if prof1[i] != prof2[j]:
            report.add("atomic-harmony", f"pair {tag} differs on an atom", (i, j))
        if z.kind == "dependence":
            for t in range(n1):
                xs = ag1[i][t]
                if dependence_closure_at(m2, j, xs) != xs:
                    report.add(
                        "forth-closedness",
                        f"pair {tag}: agreement set {sorted(xs)} with member {t} "
                        "is not dependence-closed on the right",
                        (i, j, t),
                    )
            for t2 in range(n2):
                ys = ag2[j][t2]
                if dependence_closure_at(m, i, ys) != ys:
                    report.add(
                        "back-closedness",
                        f"pair {tag}: agreement set {sorted(ys)} with member {t2} "
                        "is not dependence-closed on the left",
                        (i, j, t2),
                    )
        if z.kind == "standard":
            for xs in (frozenset(c) for c in _all_subsets(m.vocab.variables)):
                if dependence_closure_at(m, i, xs) != dependence_closure_at(m2, j, xs):
                    report.add(
                        "dependence-atom-harmony",
                        f"pair {tag} differs on a dependence atom over {sorted(xs)}",
                        (i, j, xs),
                    )
        if z.kind == "inclusion":
            left, right = pat1[i], pat2[j]
        else:
            left, right = ag1[i], ag2[j]

        def fwd(t, t2):
            return left[t] <= right[t2]

        def bwd(t, t2):
            return right[t2] <= left[t]

        for t in range(n1):
            if not any((t, t2) in z.pairs and fwd(t, t2) for t2 in range(n2)):
                report.add(
                    "forth-matching", f"pair {tag}: no match for member {t}", (i, j, t)
                )
        for t2 in range(n2):
            if not any((t, t2) in z.pairs and bwd(t, t2) for t in range(n1)):
                report.add(
                    "back-matching", f"pair {tag}: no match for member {t2}", (i, j, t2)
                )

    if z.kind == "dependence":
        if z.left_indices() != frozenset(range(n1)) or z.right_indices() != frozenset(
            range(n2)
        ):
            report.warn(
                "totality: a dependence bisimulation should relate every team member on both sides"
            )
    return report


def invariance_probe(
    m: DependenceModel,
    m2: DependenceModel,
    z: BisimRelation,
    formulas: list[Formula],
) -> ValidationReport:
    """Check that related members satisfy exactly the same formulas."""
    from .semantics import Evaluator

    report = fresh_report()
    ev1, ev2 = Evaluator(m), Evaluator(m2)
    for i, j in sorted(z.pairs):
        for phi in formulas:
            a, b = ev1.evaluate(i, phi), ev2.evaluate(j, phi)
            if a != b:
                report.add(
                    "invariance",
                    f"pair ({i},{j}) disagrees on a formula ({a} vs {b})",
                    (i, j, phi),
                )
    return report
