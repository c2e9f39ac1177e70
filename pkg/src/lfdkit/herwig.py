"""Partial isomorphisms, extension verification, and a tiny extension search.

A finite structure C together with chosen partial isomorphisms may admit
a finite extension C+ in which each chosen map grows into an
automorphism.  ``verify_herwig_extension`` checks a claimed extension
against three conditions:

(i)   every chosen map extends to an automorphism of C+ (the "hat"),
(ii)  every live tuple and every single element of C+ is carried into C
      by some member of the group generated by the hats,
(iii) whenever a non-identity group member sends an element of C to an
      element of C, exactly one map in the composition closure of the
      chosen maps (paired with that group member word-by-word) witnesses
      it.

``search_herwig_extension`` brute-forces tiny extensions; it is a
desk-scale stand-in for the existence theorem, not an algorithm for it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations, product
from typing import Hashable, Iterable, Mapping

from .errors import ConstructionError, ResourceCapError
from .fol import FOStructure
from .typemodels import ValidationReport, fresh_report

TEAM_RELATION = ("team",)

HERWIG_SIZE_CAP = 7
SEARCH_BUDGET = 200_000


@dataclass(frozen=True)
class PartialIso:
    """A finite injective partial map, stored as sorted (source, target) pairs."""

    pairs: tuple[tuple[Hashable, Hashable], ...]

    @classmethod
    def make(cls, mapping) -> "PartialIso":
        items = tuple(sorted(dict(mapping).items(), key=repr))
        targets = [b for _, b in items]
        if len(set(targets)) != len(targets):
            raise ConstructionError("partial map is not injective")
        return cls(items)

    @classmethod
    def identity(cls, domain: Iterable) -> "PartialIso":
        return cls.make({a: a for a in domain})

    @cached_property
    def as_dict(self) -> dict:
        return dict(self.pairs)

    @cached_property
    def domain(self) -> frozenset:
        return frozenset(a for a, _ in self.pairs)

    @cached_property
    def codomain(self) -> frozenset:
        return frozenset(b for _, b in self.pairs)

    def get(self, a):
        return self.as_dict.get(a)

    def apply(self, a):
        try:
            return self.as_dict[a]
        except KeyError:
            raise ConstructionError(f"{a!r} is outside the map's domain") from None

    def apply_tuple(self, t: tuple) -> tuple:
        return tuple(self.apply(a) for a in t)

    def inverse(self) -> "PartialIso":
        return PartialIso.make({b: a for a, b in self.pairs})

    def compose(self, other: "PartialIso") -> "PartialIso":
        """self after other: a goes to self(other(a)) where both are defined."""
        m = {}
        for a, b in other.pairs:
            c = self.get(b)
            if c is not None:
                m[a] = c
        return PartialIso.make(m)

    def extends(self, other: "PartialIso") -> bool:
        return set(other.pairs) <= set(self.pairs)

    def is_permutation_of(self, domain: Iterable) -> bool:
        ds = frozenset(domain)
        return self.domain == ds and self.codomain == ds

    def __len__(self) -> int:
        return len(self.pairs)


def all_relations(s: FOStructure) -> dict:
    """Named relations plus the team relation under a reserved key."""
    out = dict(s.relations)
    if s.team is not None:
        out[TEAM_RELATION] = s.team
    return out


def is_partial_iso(p: PartialIso, s: FOStructure) -> bool:
    """Does p preserve and reflect every relation of s on its domain/range?"""
    dom_ok = p.domain <= frozenset(s.domain) and p.codomain <= frozenset(s.domain)
    if not dom_ok:
        return False
    inv = p.inverse()
    for rel in all_relations(s).values():
        for t in rel:
            if all(a in p.domain for a in t) and p.apply_tuple(t) not in rel:
                return False
            if all(a in p.codomain for a in t) and inv.apply_tuple(t) not in rel:
                return False
    return True


def is_automorphism(f: PartialIso, s: FOStructure) -> bool:
    if not f.is_permutation_of(s.domain):
        return False
    for rel in all_relations(s).values():
        mapped = frozenset(f.apply_tuple(t) for t in rel)
        if mapped != rel:
            return False
    return True


def inverse_closure(ps: Iterable[PartialIso]) -> frozenset[PartialIso]:
    """All maps expressible as compositions of the given maps and converses.

    The identity is not added: only non-empty composition words count,
    so the result is a composition-closed, converse-closed family that
    may well contain the empty map (from compositions with disjoint
    ranges) but contains restrictions of the identity only when a word
    forces them.
    """
    closed: set[PartialIso] = set()
    pending: list[PartialIso] = []
    for p in ps:
        for q in (p, p.inverse()):
            if q not in closed:
                closed.add(q)
                pending.append(q)
    while pending:
        r = pending.pop()
        for q in list(closed):
            for cand in (q.compose(r), r.compose(q), r.inverse()):
                if cand not in closed:
                    closed.add(cand)
                    pending.append(cand)
    return frozenset(closed)


def group_closure(generators: Iterable[PartialIso], domain: Iterable) -> frozenset[PartialIso]:
    """The permutation group generated by total maps, identity included."""
    ident = PartialIso.identity(domain)
    closed = {ident}
    pending = []
    for g in generators:
        for q in (g, g.inverse()):
            if q not in closed:
                closed.add(q)
                pending.append(q)
    while pending:
        r = pending.pop()
        for q in list(closed):
            for cand in (q.compose(r), r.compose(q)):
                if cand not in closed:
                    closed.add(cand)
                    pending.append(cand)
    return frozenset(closed)


def _pair_closure(
    ps: Iterable[PartialIso], hats: Mapping[PartialIso, PartialIso]
) -> frozenset[tuple[PartialIso, PartialIso]]:
    """Composition closure of (map, hat) pairs, composed coordinatewise.

    Pairing a word in the chosen maps with the same word in their hats
    realizes the hat-correspondence on the whole composition closure.
    """
    closed: set[tuple[PartialIso, PartialIso]] = set()
    pending = []
    for p in ps:
        h = hats[p]
        for cand in ((p, h), (p.inverse(), h.inverse())):
            if cand not in closed:
                closed.add(cand)
                pending.append(cand)
    while pending:
        r = pending.pop()
        for q in list(closed):
            for cand in (
                (q[0].compose(r[0]), q[1].compose(r[1])),
                (r[0].compose(q[0]), r[1].compose(q[1])),
            ):
                if cand not in closed:
                    closed.add(cand)
                    pending.append(cand)
    return frozenset(closed)


def _is_substructure(c: FOStructure, cplus: FOStructure) -> list[str]:
    problems = []
    base = frozenset(c.domain)
    if not base <= frozenset(cplus.domain):
        problems.append("the base domain is not contained in the extension")
        return problems
    rels_c = all_relations(c)
    rels_p = all_relations(cplus)
    if set(rels_c) != set(rels_p):
        problems.append("the two structures use different relation names")
        return problems
    for name, rel in rels_c.items():
        restricted = frozenset(
            t for t in rels_p[name] if all(a in base for a in t)
        )
        if restricted != rel:
            problems.append(
                f"relation {name!r} restricted to the base domain differs"
            )
    return problems


def verify_herwig_extension(
    c: FOStructure,
    ps: list[PartialIso],
    cplus: FOStructure,
    hats: Mapping[PartialIso, PartialIso],
) -> ValidationReport:
    """Audit a claimed extension against conditions (i)-(iii)."""
    report = fresh_report()
    for msg in _is_substructure(c, cplus):
        report.add("substructure", msg, None)
    if report.violations:
        return report

    base = frozenset(c.domain)
    for p in ps:
        hat = hats.get(p)
        if hat is None:
            report.add("i", f"no automorphism assigned to {p.pairs}", p)
            continue
        if not is_automorphism(hat, cplus):
            report.add("i", f"assigned map for {p.pairs} is not an automorphism", p)
        if not hat.extends(p):
            report.add("i", f"assigned automorphism does not extend {p.pairs}", p)
    if report.violations:
        return report

    group = group_closure([hats[p] for p in ps], cplus.domain)
    ident = PartialIso.identity(cplus.domain)

    tuples = [(a,) for a in cplus.domain]
    for rel in all_relations(cplus).values():
        tuples.extend(rel)
    for t in tuples:
        if not any(all(f.apply(a) in base for a in t) for f in group):
            report.add(
                "ii",
                f"no group element carries {t!r} into the base structure",
                t,
            )

    pairs = _pair_closure(ps, hats)
    for f in sorted(group - {ident}, key=lambda g: g.pairs):
        for a in c.domain:
            b = f.apply(a)
            if b not in base:
                continue
            witnesses = {p for p, g in pairs if g == f and p.get(a) == b}
            if len(witnesses) == 0:
                report.add(
                    "iii",
                    f"no composition-closure map sends {a!r} to {b!r} alongside "
                    "the group element",
                    (f.pairs, a, b),
                )
            elif len(witnesses) > 1:
                report.add(
                    "iii",
                    f"{len(witnesses)} distinct maps send {a!r} to {b!r} alongside "
                    "the same group element",
                    (f.pairs, a, b),
                )
    return report


@dataclass
class HerwigSearchResult:
    structure: FOStructure | None
    hats: dict[PartialIso, PartialIso] | None
    found: bool
    capped: bool
    examined: int
    reason: str


def _fresh_elements(domain: tuple, n: int) -> list:
    if all(isinstance(a, int) for a in domain):
        start = max(domain, default=0) + 1
        return list(range(start, start + n))
    used = set(domain)
    out = []
    i = 0
    while len(out) < n:
        cand = f"e{i}"
        if cand not in used:
            out.append(cand)
        i += 1
    return out


def _relation_arities(s: FOStructure, arities: Mapping[str, int] | None) -> dict[str, int]:
    out = dict(arities or {})
    for name, rel in s.relations.items():
        if name in out:
            continue
        if rel:
            out[name] = len(next(iter(rel)))
        else:
            raise ConstructionError(
                f"cannot infer the arity of empty relation {name!r}; pass arities"
            )
    return out


def _canonical_key(added: dict[str, frozenset], new_elems: list) -> tuple:
    best = None
    for perm in permutations(new_elems):
        swap = dict(zip(new_elems, perm))
        key = tuple(
            (
                name,
                tuple(sorted(tuple(swap.get(a, a) for a in t) for t in rel)),
            )
            for name, rel in sorted(added.items())
        )
        if best is None or key < best:
            best = key
    return best


def _automorphism_candidates(s: FOStructure, p: PartialIso) -> list[PartialIso]:
    """Total permutations extending p that are automorphisms, in sorted order."""
    fixed = p.as_dict
    rest = sorted((a for a in s.domain if a not in fixed), key=repr)
    free_targets = sorted(
        (b for b in s.domain if b not in p.codomain), key=repr
    )
    out = []
    for perm in permutations(free_targets):
        full = dict(fixed)
        full.update(zip(rest, perm))
        f = PartialIso.make(full)
        if is_automorphism(f, s):
            out.append(f)
    return out


def search_herwig_extension(
    c: FOStructure,
    ps: list[PartialIso],
    max_size: int,
    budget: int = SEARCH_BUDGET,
    arities: Mapping[str, int] | None = None,
    size_cap: int = HERWIG_SIZE_CAP,
) -> HerwigSearchResult:
    """Exhaustive search for a passing extension with up to max_size new elements.

    A miss below the budget does not refute existence; the guaranteed
    extensions can be far larger than anything this will visit.
    Structures carrying a team relation are rejected.
    """
    if c.team is not None:
        raise ConstructionError("extension search handles plain structures only")
    if len(c.domain) + max_size > size_cap:
        raise ResourceCapError(
            f"search over {len(c.domain)}+{max_size} elements exceeds the cap of {size_cap}"
        )
    rel_arities = _relation_arities(c, arities)
    examined = 0

    for size in range(max_size + 1):
        new_elems = _fresh_elements(c.domain, size)
        domain_plus = tuple(c.domain) + tuple(new_elems)
        slots = []
        for name in sorted(rel_arities):
            r = rel_arities[name]
            for t in product(domain_plus, repeat=r):
                if any(a in new_elems for a in t):
                    slots.append((name, t))
        seen_keys = set()
        for mask in range(1 << len(slots)):
            examined += 1
            if examined > budget:
                return HerwigSearchResult(
                    None, None, False, True, examined - 1, "budget exhausted"
                )
            added: dict[str, set] = {name: set() for name in rel_arities}
            for k, (name, t) in enumerate(slots):
                if mask >> k & 1:
                    added[name].add(t)
            frozen_added = {n: frozenset(ts) for n, ts in added.items()}
            key = _canonical_key(frozen_added, new_elems)
            if key in seen_keys:
                continue
            seen_keys.add(key)
            cplus = FOStructure(
                domain=domain_plus,
                relations={
                    name: c.relations[name] | frozen_added[name]
                    for name in rel_arities
                },
            )
            candidate_hats = [_automorphism_candidates(cplus, p) for p in ps]
            if any(not cands for cands in candidate_hats):
                continue
            for combo in product(*candidate_hats):
                examined += 1
                if examined > budget:
                    return HerwigSearchResult(
                        None, None, False, True, examined - 1, "budget exhausted"
                    )
                hats = dict(zip(ps, combo))
                if verify_herwig_extension(c, ps, cplus, hats).ok:
                    return HerwigSearchResult(
                        cplus, hats, True, False, examined, "found"
                    )
    return HerwigSearchResult(None, None, False, False, examined, "search space exhausted")
