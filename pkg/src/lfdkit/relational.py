"""Modal semantics over relational models of dependence.

A relational model carries a state set, an equivalence relation per
variable subset, and unary valuations for dependence atoms and
predicate atoms.  General models satisfy the first five frame
conditions; standard models satisfy all seven.  Histories through a
general model, with one-step and transitive-closure relations, provide
the bridge from general to standard models, and the link/packed/
forbidden-structure checks cover the structural side conditions used
alongside automorphism extensions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations, product
from typing import Hashable, Mapping, Sequence

from .errors import (
    ConstructionError,
    EvaluationError,
    UnsupportedAtomError,
    VocabularyError,
)
from .fol import FOStructure
from .herwig import all_relations
from .semantics import DependenceModel, Evaluator
from .syntax import And, DAtom, DQuant, Formula, Not, PredAtom, subsets_of
from .typemodels import ValidationReport, fresh_report

EMPTY: frozenset[str] = frozenset()


def subset_label(xs: frozenset[str]) -> str:
    return "{" + ",".join(sorted(xs)) + "}"


def parse_subset_label(text: str) -> frozenset[str]:
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError(f"not a variable-set label: {text!r}")
    inner = body[1:-1].strip()
    if not inner:
        return EMPTY
    return frozenset(part.strip() for part in inner.split(","))


@dataclass(eq=False)
class RelationalModel:
    """States with per-subset relations and unary atom valuations.

    Relations map variable subsets to sets of ordered state-index
    pairs.  Dependence atoms are keyed by (subset, variable), predicate
    atoms by (predicate, argument tuple); a missing key means the atom
    is false everywhere.
    """

    variables: tuple[str, ...]
    states: tuple[Hashable, ...]
    relations: Mapping[frozenset[str], frozenset[tuple[int, int]]]
    dep_atoms: Mapping[tuple[frozenset[str], str], frozenset[int]]
    pred_atoms: Mapping[tuple[str, tuple[str, ...]], frozenset[int]]

    @classmethod
    def make(
        cls,
        variables: Sequence[str],
        states: Sequence[Hashable],
        relations: Mapping,
        dep_atoms: Mapping,
        pred_atoms: Mapping,
    ) -> "RelationalModel":
        rels = {
            frozenset(xs): frozenset((int(i), int(j)) for i, j in pairs)
            for xs, pairs in relations.items()
        }
        deps = {
            (frozenset(xs), y): frozenset(int(i) for i in members)
            for (xs, y), members in dep_atoms.items()
        }
        preds = {
            (pred, tuple(args)): frozenset(int(i) for i in members)
            for (pred, args), members in pred_atoms.items()
        }
        return cls(tuple(variables), tuple(states), rels, deps, preds)

    def __post_init__(self) -> None:
        if len(set(self.states)) != len(self.states):
            raise ConstructionError("duplicate state labels")
        n = len(self.states)
        varset = set(self.variables)

        def check_index(i: int, where: str) -> None:
            if not 0 <= i < n:
                raise ConstructionError(f"state index {i} out of range in {where}")

        for xs, pairs in self.relations.items():
            if not xs <= varset:
                raise VocabularyError(f"unknown variables in relation {subset_label(xs)}")
            for i, j in pairs:
                check_index(i, f"relation {subset_label(xs)}")
                check_index(j, f"relation {subset_label(xs)}")
        arities: dict[str, int] = {}
        for (xs, y), members in self.dep_atoms.items():
            if not xs <= varset or y not in varset:
                raise VocabularyError(f"unknown variables in dependence atom over {subset_label(xs)}")
            for i in members:
                check_index(i, "dependence atom valuation")
        for (pred, args), members in self.pred_atoms.items():
            if not set(args) <= varset:
                raise VocabularyError(f"unknown variables in atom {pred}{args}")
            if arities.setdefault(pred, len(args)) != len(args):
                raise VocabularyError(f"inconsistent arity for predicate {pred}")
            for i in members:
                check_index(i, f"valuation of {pred}")

    @cached_property
    def state_index(self) -> dict[Hashable, int]:
        return {label: i for i, label in enumerate(self.states)}

    def index_of(self, s) -> int:
        if s in self.state_index:
            return self.state_index[s]
        if isinstance(s, int) and not isinstance(s, bool) and 0 <= s < len(self.states):
            return s
        raise EvaluationError(f"unknown state {s!r}")

    def sim(self, xs: frozenset[str]) -> frozenset[tuple[int, int]] | None:
        return self.relations.get(frozenset(xs))

    def has_dep(self, i: int, xs: frozenset[str], y: str) -> bool:
        return i in self.dep_atoms.get((frozenset(xs), y), EMPTY)

    def has_pred(self, i: int, pred: str, args: tuple[str, ...]) -> bool:
        return i in self.pred_atoms.get((pred, tuple(args)), EMPTY)

    def dep_set(self, i: int) -> frozenset[tuple[frozenset[str], str]]:
        """The pairs (X, y) whose dependence atom holds at state i."""
        return frozenset(key for key, members in self.dep_atoms.items() if i in members)

    def class_of(self, s, xs: frozenset[str]) -> frozenset[int]:
        rel = self.sim(xs)
        if rel is None:
            raise EvaluationError(f"no stored relation for {subset_label(frozenset(xs))}")
        i = self.index_of(s)
        return frozenset(j for a, j in rel if a == i)


def dep_truth_via_classes(r: RelationalModel, s, xs: frozenset[str], y: str) -> bool:
    """Containment reading of a dependence atom: the xs-class sits inside the y-class."""
    return r.class_of(s, xs) <= r.class_of(s, frozenset({y}))


def validate_relational(r: RelationalModel, standard: bool) -> ValidationReport:
    """Check the frame conditions, the last two only when standard is set.

    Conditions are named by what they require: equivalence,
    dep-transitivity-projection, dep-transfer, atom-transfer,
    empty-universal, union-closure, induced-dep.
    """
    report = fresh_report()
    n = len(r.states)
    indices = range(n)
    stored = sorted(r.relations, key=lambda xs: (len(xs), sorted(xs)))

    adjacency: dict[frozenset[str], list[frozenset[int]]] = {}
    for xs in stored:
        out: list[set[int]] = [set() for _ in indices]
        for i, j in r.relations[xs]:
            out[i].add(j)
        adjacency[xs] = [frozenset(js) for js in out]

    for xs in stored:
        label = subset_label(xs)
        pairs = r.relations[xs]
        adj = adjacency[xs]
        for i in indices:
            if (i, i) not in pairs:
                report.add("equivalence", f"{label} not reflexive", (i,))
        for i, j in pairs:
            if (j, i) not in pairs:
                report.add("equivalence", f"{label} not symmetric", (i, j))
        # Transitivity: every neighbour's neighbourhood is contained in yours.
        for i in indices:
            for j in sorted(adj[i]):
                if adj[j] <= adj[i]:
                    continue
                for k in sorted(adj[j] - adj[i]):
                    report.add("equivalence", f"{label} not transitive", (i, j, k))
                    break

    subsets = list(subsets_of(r.variables))
    for i in indices:
        for xs in subsets:
            for y in xs:
                if not r.has_dep(i, xs, y):
                    report.add(
                        "dep-transitivity-projection",
                        f"projection gap: member {y} of {subset_label(xs)} not determined",
                        (i, subset_label(xs), y),
                    )
        for xs in subsets:
            for ys in subsets:
                if not all(r.has_dep(i, xs, y) for y in ys):
                    continue
                for z in r.variables:
                    if r.has_dep(i, ys, z) and not r.has_dep(i, xs, z):
                        report.add(
                            "dep-transitivity-projection",
                            "transitivity gap",
                            (i, subset_label(xs), subset_label(ys), z),
                        )

    for (xs, y), members in sorted(
        r.dep_atoms.items(), key=lambda item: (sorted(item[0][0]), item[0][1])
    ):
        rel = r.sim(xs)
        if rel is None:
            continue
        single = r.sim(frozenset({y}))
        for i, j in rel:
            if i not in members:
                continue
            if single is None:
                report.add(
                    "dep-transfer",
                    f"no stored relation for {subset_label(frozenset({y}))}",
                    (i, j),
                )
            elif (i, j) not in single:
                report.add(
                    "dep-transfer",
                    f"determined value of {y} changes along {subset_label(xs)}",
                    (i, j),
                )
            if j not in members:
                report.add(
                    "dep-transfer",
                    f"dependence atom over {subset_label(xs)} lost along its own relation",
                    (i, j),
                )

    for (pred, args), members in sorted(r.pred_atoms.items()):
        needed = set(args)
        for xs in stored:
            if not needed <= xs:
                continue
            for i, j in r.relations[xs]:
                if i in members and j not in members:
                    report.add(
                        "atom-transfer",
                        f"{pred} atom on {subset_label(frozenset(args))} lost along {subset_label(xs)}",
                        (i, j),
                    )

    empty_rel = r.sim(EMPTY)
    if empty_rel is None:
        report.add("empty-universal", "no stored relation for the empty set", ())
    else:
        for i in indices:
            for j in indices:
                if (i, j) not in empty_rel:
                    report.add("empty-universal", "missing pair", (i, j))

    for xs in stored:
        for ys in stored:
            union = frozenset(xs | ys)
            both = r.relations[xs] & r.relations[ys]
            merged = r.sim(union)
            for i, j in both:
                if merged is None:
                    report.add(
                        "union-closure",
                        f"no stored relation for {subset_label(union)}",
                        (i, j),
                    )
                    break
                if (i, j) not in merged:
                    report.add(
                        "union-closure",
                        f"{subset_label(xs)} and {subset_label(ys)} agree but {subset_label(union)} does not",
                        (i, j),
                    )

    if standard:
        for xs in stored:
            adj = adjacency[xs]
            for y in sorted(r.variables):
                singleton = frozenset({y})
                if singleton not in adjacency:
                    continue
                single = adjacency[singleton]
                for i in indices:
                    if adj[i] <= single[i] and not r.has_dep(i, xs, y):
                        report.add(
                            "induced-dep",
                            f"{subset_label(xs)} settles {y} at this state but the atom is absent",
                            (i, subset_label(xs), y),
                        )
    return report


def to_relational(m: DependenceModel) -> RelationalModel:
    """Relational counterpart of a dependence model, one state per team member."""
    ev = Evaluator(m)
    vocab = m.vocab
    n = len(m.team)
    relations = {}
    for xs in subsets_of(vocab.variables):
        relations[xs] = frozenset(
            (i, j)
            for i in range(n)
            for j in range(n)
            if all(m.team[i][x] == m.team[j][x] for x in xs)
        )
    dep_atoms = {}
    for xs in subsets_of(vocab.variables):
        for y in vocab.variables:
            members = frozenset(i for i in range(n) if ev.evaluate(i, DAtom(xs, y)))
            if members:
                dep_atoms[(xs, y)] = members
    pred_atoms = {}
    for pred, arity in vocab.predicates:
        for args in product(vocab.variables, repeat=arity):
            atom = PredAtom(pred, args)
            members = frozenset(i for i in range(n) if ev.evaluate(i, atom))
            if members:
                pred_atoms[(pred, args)] = members
    return RelationalModel(
        vocab.variables, tuple(range(n)), relations, dep_atoms, pred_atoms
    )


def modal_eval(r: RelationalModel, s, phi: Formula) -> bool:
    """Truth at a state: boxes quantify over the stored relation for their subset."""
    i = r.index_of(s)

    def run(j: int, f: Formula) -> bool:
        if isinstance(f, PredAtom):
            return r.has_pred(j, f.pred, f.args)
        if isinstance(f, DAtom):
            return r.has_dep(j, f.xs, f.y)
        if isinstance(f, Not):
            return not run(j, f.body)
        if isinstance(f, And):
            return run(j, f.left) and run(j, f.right)
        if isinstance(f, DQuant):
            rel = r.sim(f.xs)
            if rel is None:
                raise EvaluationError(
                    f"no stored relation for {subset_label(f.xs)}"
                )
            return all(run(t, f.body) for a, t in rel if a == j)
        raise UnsupportedAtomError(
            "only core formulas have relational truth conditions"
        )

    return run(i, phi)


@dataclass(frozen=True)
class History:
    """A walk from the root recording the subset label of every step."""

    root: int
    steps: tuple[tuple[frozenset[str], int], ...] = ()

    @property
    def lh(self) -> int:
        return len(self.steps) + 1

    @property
    def last(self) -> int:
        return self.steps[-1][1] if self.steps else self.root

    def extend(self, xs: frozenset[str], state: int) -> "History":
        return History(self.root, self.steps + ((frozenset(xs), state),))

    def parent(self) -> "History":
        if not self.steps:
            raise ConstructionError("the root history has no parent")
        return History(self.root, self.steps[:-1])

    def printed(self, states: Sequence[Hashable]) -> str:
        parts = [str(states[self.root])]
        for xs, state in self.steps:
            parts.append(subset_label(xs))
            parts.append(str(states[state]))
        return "(" + ",".join(parts) + ")"


@dataclass(eq=False)
class HistoryModel:
    """All bounded-length histories through a base model, with one-step relations.

    Histories are indexed in creation order (root first, breadth
    first).  One-step relations hold between a history and its direct
    extensions, in both orientations, whenever the parent's final state
    determines every variable of the relation's subset from the step
    label.
    """

    base: RelationalModel
    root: int
    depth: int
    histories: tuple[History, ...]
    parents: tuple[int | None, ...]
    one_step: Mapping[frozenset[str], frozenset[tuple[int, int]]]

    @cached_property
    def history_index(self) -> dict[History, int]:
        return {h: i for i, h in enumerate(self.histories)}

    def cut_indices(self, length: int = 3) -> tuple[int, ...]:
        return tuple(i for i, h in enumerate(self.histories) if h.lh <= length)

    def last_state(self, i: int) -> int:
        return self.histories[i].last


def build_histories(b: RelationalModel, b0, depth: int) -> HistoryModel:
    """Expand every step the base relations allow, up to the length bound."""
    if depth < 1:
        raise ConstructionError("history depth must be at least 1")
    root = b.index_of(b0)
    subsets = list(subsets_of(b.variables))
    histories: list[History] = [History(root)]
    parents: list[int | None] = [None]
    frontier = [0]
    while frontier:
        next_frontier = []
        for idx in frontier:
            h = histories[idx]
            if h.lh >= depth:
                continue
            for ys in subsets:
                rel = b.sim(ys)
                if rel is None:
                    continue
                for a, t in sorted(rel):
                    if a != h.last:
                        continue
                    child = h.extend(ys, t)
                    parents.append(idx)
                    histories.append(child)
                    next_frontier.append(len(histories) - 1)
        frontier = next_frontier

    one_step: dict[frozenset[str], set[tuple[int, int]]] = {
        xs: set() for xs in subsets
    }
    for j, h in enumerate(histories):
        if not h.steps:
            continue
        i = parents[j]
        ys, _ = h.steps[-1]
        parent_last = histories[i].last
        for xs in subsets:
            if all(b.has_dep(parent_last, ys, x) for x in xs):
                one_step[xs].add((i, j))
                one_step[xs].add((j, i))
    frozen = {xs: frozenset(pairs) for xs, pairs in one_step.items()}
    return HistoryModel(b, root, depth, tuple(histories), tuple(parents), frozen)


def _unique_shortest_paths(
    n: int, edges: frozenset[tuple[int, int]], source: int
) -> tuple[list[int], list[int | None]]:
    """BFS distances and predecessors; a second equal-length route is an error."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, j in edges:
        adj[i].append(j)
    dist = [-1] * n
    pred: list[int | None] = [None] * n
    dist[source] = 0
    queue = [source]
    while queue:
        nxt = []
        for i in queue:
            for j in sorted(adj[i]):
                if dist[j] == -1:
                    dist[j] = dist[i] + 1
                    pred[j] = i
                    nxt.append(j)
                elif dist[j] == dist[i] + 1 and pred[j] != i:
                    raise ConstructionError(
                        f"two shortest walks of length {dist[j]} reach state {j}"
                    )
        queue = nxt
    return dist, pred


def transitive_closure_relations(h: HistoryModel) -> RelationalModel:
    """Relations along unique shortest empty-set walks, all steps matching.

    States keep the order of the history model's index; labels are the
    printed histories.  Atom valuations carry over from each history's
    final state.
    """
    n = len(h.histories)
    base_edges = h.one_step.get(EMPTY, frozenset())
    subsets = list(subsets_of(h.base.variables))

    paths: list[list[list[int] | None]] = []
    for source in range(n):
        dist, pred = _unique_shortest_paths(n, base_edges, source)
        row: list[list[int] | None] = []
        for target in range(n):
            if dist[target] == -1:
                raise ConstructionError(
                    "empty-set one-step graph is not connected"
                )
            node: int | None = target
            walk = []
            while node is not None:
                walk.append(node)
                node = pred[node]
            row.append(list(reversed(walk)))
        paths.append(row)

    relations = {}
    for xs in subsets:
        step_rel = h.one_step.get(xs, frozenset())
        pairs = set()
        for s in range(n):
            for t in range(n):
                if s == t:
                    pairs.add((s, t))
                    continue
                walk = paths[s][t]
                if all(
                    (walk[i], walk[i + 1]) in step_rel
                    for i in range(len(walk) - 1)
                ):
                    pairs.add((s, t))
        relations[xs] = frozenset(pairs)

    dep_atoms: dict[tuple[frozenset[str], str], frozenset[int]] = {}
    for (xs, y), members in h.base.dep_atoms.items():
        holders = frozenset(
            i for i in range(n) if h.last_state(i) in members
        )
        if holders:
            dep_atoms[(xs, y)] = holders
    pred_atoms: dict[tuple[str, tuple[str, ...]], frozenset[int]] = {}
    for (pred, args), members in h.base.pred_atoms.items():
        holders = frozenset(
            i for i in range(n) if h.last_state(i) in members
        )
        if holders:
            pred_atoms[(pred, args)] = holders

    labels = tuple(hist.printed(h.base.states) for hist in h.histories)
    return RelationalModel(
        h.base.variables, labels, relations, dep_atoms, pred_atoms
    )


def sim_graph(
    r: RelationalModel, xs: frozenset[str], relation_name: str | None = None
) -> FOStructure:
    """The stored relation for one subset as a structure, reflexive arrows dropped."""
    pairs = r.sim(frozenset(xs))
    if pairs is None:
        raise EvaluationError(f"no stored relation for {subset_label(frozenset(xs))}")
    name = relation_name or "~" + subset_label(frozenset(xs))
    live = frozenset((i, j) for i, j in pairs if i != j)
    return FOStructure(tuple(range(len(r.states))), {name: live})


def one_step_graph(
    h: HistoryModel, xs: frozenset[str], relation_name: str | None = None
) -> FOStructure:
    name = relation_name or "~" + subset_label(frozenset(xs))
    pairs = h.one_step.get(frozenset(xs), frozenset())
    return FOStructure(tuple(range(len(h.histories))), {name: pairs})


def forbidden_cycles(
    relation_name: str, max_size: int, min_size: int = 3
) -> tuple[FOStructure, ...]:
    """Complete loop structures: every ordered pair of distinct points related."""
    out = []
    for m in range(min_size, max_size + 1):
        pairs = frozenset(
            (i, j) for i in range(m) for j in range(m) if i != j
        )
        out.append(FOStructure(tuple(range(m)), {relation_name: pairs}))
    return tuple(out)


def link_structures(s: FOStructure) -> tuple[FOStructure, ...]:
    """Induced substructures on live-tuple element sets and on singletons."""
    supports = {frozenset(t) for ts in all_relations(s).values() for t in ts}
    supports |= {frozenset({a}) for a in s.domain}
    out = []
    for support in sorted(supports, key=lambda u: (len(u), sorted(map(repr, u)))):
        out.append(_induced(s, support))
    return tuple(out)


def _induced(s: FOStructure, support: frozenset) -> FOStructure:
    domain = tuple(sorted(support, key=repr))
    relations = {
        name: frozenset(t for t in ts if set(t) <= support)
        for name, ts in all_relations(s).items()
    }
    return FOStructure(domain, relations)


def _is_link(s: FOStructure) -> bool:
    if len(s.domain) == 1:
        return True
    return any(
        frozenset(t) == frozenset(s.domain)
        for ts in all_relations(s).values()
        for t in ts
    )


def _isomorphic(a: FOStructure, b: FOStructure) -> bool:
    if len(a.domain) != len(b.domain):
        return False
    ra, rb = all_relations(a), all_relations(b)
    if set(ra) != set(rb):
        return False
    for image in permutations(b.domain):
        swap = dict(zip(a.domain, image))
        if all(
            frozenset(tuple(swap[v] for v in t) for t in ra[name]) == rb[name]
            for name in ra
        ):
            return True
    return False


def homomorphism_exists(f: FOStructure, m: FOStructure) -> bool:
    """Backtracking search for a relation-preserving map from f into m."""
    rf, rm = all_relations(f), all_relations(m)
    for name, ts in rf.items():
        if () in ts and () not in rm.get(name, frozenset()):
            return False
    order = tuple(sorted(f.domain, key=repr))
    pos = {a: i for i, a in enumerate(order)}
    constraints: list[list[tuple[str, tuple]]] = [[] for _ in order]
    for name, ts in rf.items():
        for t in ts:
            if t:
                constraints[max(pos[v] for v in t)].append((name, t))

    assignment: dict = {}

    def assign(i: int) -> bool:
        if i == len(order):
            return True
        for candidate in m.domain:
            assignment[order[i]] = candidate
            ok = True
            for name, t in constraints[i]:
                image = tuple(assignment[v] for v in t)
                if image not in rm.get(name, frozenset()):
                    ok = False
                    break
            if ok and assign(i + 1):
                return True
        assignment.pop(order[i], None)
        return False

    return assign(0)


def check_link_packed_free(
    s: FOStructure,
    links: Sequence[FOStructure],
    forbidden: Sequence[FOStructure],
) -> ValidationReport:
    """Link-type conformance, packedness, irreflexivity, forbidden-freeness.

    The homomorphism search is exhaustive; it stays fast for forbidden
    members of at most 6 elements against targets of at most 12, and a
    warning marks anything bigger.
    """
    report = fresh_report()
    own_links = link_structures(s)
    for candidate in own_links:
        if not _is_link(candidate):
            continue
        if not any(_isomorphic(candidate, l) for l in links):
            report.add(
                "link-type",
                "link substructure matches nothing in the allowed set",
                candidate.domain,
            )

    live_supports = {
        frozenset(t) for ts in all_relations(s).values() for t in ts
    }
    elems = list(s.domain)
    for ai, a in enumerate(elems):
        for b in elems[ai + 1 :]:
            if not any({a, b} <= u for u in live_supports):
                report.add("packed", "pair shares no live tuple", (a, b))

    for name, ts in sorted(all_relations(s).items()):
        for t in sorted(ts):
            if len(set(t)) != len(t):
                report.add(
                    "irreflexive", f"repeated element in a {name} tuple", t
                )

    for f in forbidden:
        if len(f.domain) > 6 or len(s.domain) > 12:
            report.warn(
                f"forbidden-free: size {len(f.domain)} vs {len(s.domain)} "
                "exceeds the documented exact bound"
            )
        if homomorphism_exists(f, s):
            report.add(
                "forbidden-free",
                f"forbidden structure on {len(f.domain)} elements maps in",
                f.domain,
            )
    return report
