"""Good-path unravelling of type models, cut-off, and partial-iso plumbing.

A type model unravels into a tree of good paths: alternating sequences
of types and variable scopes where consecutive types look alike on the
scope's dependence closure.  Each path carries an assignment that reuses
the parent's object for a variable exactly when the scope's dependence
closure pins it down, and mints a fresh object otherwise.  Predicates
hold of an object tuple when the creating paths form a chain and the
deepest one's type contains the atom.

Cutting the tree at path length 3 keeps the model finite while
preserving dependence-atom truth at paths of length up to 2, which is
what the restricted truth check audits.  The expansion step materialises
one fresh relation per dependence atom so that partial isomorphisms
between a depth-3 path and its depth-2 companion respect dependence
structure, and those maps are what an extension search would consume.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property
from itertools import product

from .errors import ConstructionError
from .fol import encode_structure
from .herwig import PartialIso, is_partial_iso
from .semantics import Assignment, DependenceModel, Evaluator
from .syntax import DAtom, PredAtom, Vocabulary, occurring_preds, subsets_of
from .typemodels import (
    TypeModel,
    ValidationReport,
    fresh_report,
    type_dep_closure,
    type_sim,
    validate_type_model,
)

CUTOFF_LENGTH = 3


@dataclass(frozen=True)
class GoodPath:
    """Alternating sequence of a root type and (scope, type) steps."""

    root: int
    steps: tuple[tuple[frozenset[str], int], ...] = ()

    @property
    def lh(self) -> int:
        return len(self.steps) + 1

    @property
    def last(self) -> int:
        return self.steps[-1][1] if self.steps else self.root

    def extend(self, xs: frozenset[str], t: int) -> "GoodPath":
        return GoodPath(self.root, self.steps + ((xs, t),))

    def parent(self) -> "GoodPath | None":
        if not self.steps:
            return None
        return GoodPath(self.root, self.steps[:-1])

    def prefixes(self):
        """All initial segments, shortest first, ending with the path itself."""
        for n in range(len(self.steps) + 1):
            yield GoodPath(self.root, self.steps[:n])

    def printed(self) -> str:
        parts = [f"T{self.root}"]
        for xs, t in self.steps:
            parts.append("{%s}" % ",".join(sorted(xs)))
            parts.append(f"T{t}")
        return "<" + ",".join(parts) + ">"


@dataclass(eq=False)
class UnravelledModel:
    model: DependenceModel
    type_model: TypeModel
    depth: int
    paths: tuple[GoodPath, ...]
    path_values: tuple[tuple[int, ...], ...]
    creators: dict[int, tuple[int, str]]

    @cached_property
    def path_index(self) -> dict[GoodPath, int]:
        return {p: i for i, p in enumerate(self.paths)}

    def assignment_of(self, i: int) -> Assignment:
        return Assignment(self.model.vocab.variables, self.path_values[i])

    def team_position(self, i: int) -> int:
        return self.model.index_of(self.assignment_of(i))

    @cached_property
    def children(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {i: [] for i in range(len(self.paths))}
        for i, p in enumerate(self.paths):
            par = p.parent()
            if par is not None:
                out[self.path_index[par]].append(i)
        return out

    def branching_degree(self) -> int:
        return max((len(ch) for ch in self.children.values()), default=0)


def unravel(tm: TypeModel, root: int, depth: int) -> UnravelledModel:
    """The dependence model over all good paths of length up to depth."""
    if depth < 1:
        raise ConstructionError("unravelling depth must be at least 1")
    report = validate_type_model(tm)
    if not report.ok:
        raise ConstructionError(f"invalid type model: {report.summary()}")
    if not 0 <= root < len(tm.types):
        raise ConstructionError(f"no type {root} in the type model")

    cl = tm.closure
    variables = cl.variables
    vocab = Vocabulary.make(variables, occurring_preds(cl.origin))
    var_pos = {v: i for i, v in enumerate(variables)}

    paths: list[GoodPath] = [GoodPath(root)]
    values: list[tuple[int, ...]] = []
    creators: dict[int, tuple[int, str]] = {}

    def mint(path_idx: int, var: str) -> int:
        oid = len(creators)
        creators[oid] = (path_idx, var)
        return oid

    values.append(tuple(mint(0, v) for v in variables))

    frontier = [0]
    for _ in range(1, depth):
        fresh_frontier = []
        for i in frontier:
            sigma = tm.types[paths[i].last]
            for xs in subsets_of(variables):
                pinned = type_dep_closure(sigma, xs)
                for dj, delta in enumerate(tm.types):
                    if not type_sim(sigma, delta, xs):
                        continue
                    new_path = paths[i].extend(xs, dj)
                    new_idx = len(paths)
                    paths.append(new_path)
                    values.append(
                        tuple(
                            values[i][var_pos[v]] if v in pinned else mint(new_idx, v)
                            for v in variables
                        )
                    )
                    fresh_frontier.append(new_idx)
        frontier = fresh_frontier

    team: list[Assignment] = []
    seen_values = set()
    for vals in values:
        if vals not in seen_values:
            seen_values.add(vals)
            team.append(Assignment(vocab.variables, vals))

    interp = _coherent_interpretation(vocab, tm, paths, values, creators)
    domain = tuple(range(len(creators)))
    model = DependenceModel(vocab, domain, interp, tuple(team))
    return UnravelledModel(model, tm, depth, tuple(paths), tuple(values), creators)


def _coherent_interpretation(
    vocab: Vocabulary,
    tm: TypeModel,
    paths: list[GoodPath],
    values: list[tuple[int, ...]],
    creators: dict[int, tuple[int, str]],
) -> dict[str, frozenset]:
    """Predicate extensions read off the deepest creating path of each tuple."""
    cl = tm.closure
    var_pos = {v: i for i, v in enumerate(vocab.variables)}
    path_index = {p: i for i, p in enumerate(paths)}
    interp: dict[str, set] = {p: set() for p, _ in vocab.predicates}

    prefix_cache: dict[int, list[int]] = {}

    def prefix_indices(i: int) -> list[int]:
        got = prefix_cache.get(i)
        if got is None:
            got = [path_index[q] for q in paths[i].prefixes()]
            prefix_cache[i] = got
        return got

    for pred, arity in vocab.predicates:
        if arity == 0:
            idx = cl.index.get(PredAtom(pred, ()))
            if idx is not None and tm.types[paths[0].last].has(idx):
                interp[pred].add(())
            continue
        for ri in range(len(paths)):
            rho_type = tm.types[paths[ri].last]
            depth_here = paths[ri].lh
            pres = prefix_indices(ri)
            for args in product(vocab.variables, repeat=arity):
                idx = cl.index.get(PredAtom(pred, args))
                if idx is None or not rho_type.has(idx):
                    continue
                choices = []
                for x in args:
                    col = var_pos[x]
                    opts = []
                    for qi in pres:
                        oid = values[qi][col]
                        if oid not in opts:
                            opts.append(oid)
                    choices.append(opts)
                for combo in product(*choices):
                    deepest = max(paths[creators[o][0]].lh for o in combo)
                    if deepest == depth_here:
                        interp[pred].add(combo)
    return {p: frozenset(ts) for p, ts in interp.items()}


def cutoff(u: UnravelledModel) -> UnravelledModel:
    """Restriction to paths of length at most 3."""
    if u.depth < CUTOFF_LENGTH:
        raise ConstructionError("cut-off needs an unravelling of depth at least 3")
    keep = [i for i, p in enumerate(u.paths) if p.lh <= CUTOFF_LENGTH]
    kept_paths = tuple(u.paths[i] for i in keep)
    kept_values = tuple(u.path_values[i] for i in keep)
    objects = sorted({o for vals in kept_values for o in vals})
    obj_set = set(objects)
    interp = {
        p: frozenset(t for t in ts if all(o in obj_set for o in t))
        for p, ts in u.model.interp.items()
    }
    team: list[Assignment] = []
    seen = set()
    for vals in kept_values:
        if vals not in seen:
            seen.add(vals)
            team.append(Assignment(u.model.vocab.variables, vals))
    model = DependenceModel(u.model.vocab, tuple(objects), interp, tuple(team))
    creators = {o: u.creators[o] for o in objects}
    return UnravelledModel(
        model, u.type_model, CUTOFF_LENGTH, kept_paths, kept_values, creators
    )


def tree_decomposition(u: UnravelledModel) -> tuple[list[int | None], list[frozenset]]:
    """Parent indices and object bags of the path tree."""
    parent: list[int | None] = []
    bags: list[frozenset] = []
    for i, p in enumerate(u.paths):
        par = p.parent()
        parent.append(None if par is None else u.path_index[par])
        bags.append(frozenset(u.path_values[i]))
    return parent, bags


def verify_k_tree(
    m: DependenceModel,
    parent: list[int | None],
    bags: list[frozenset],
    k: int,
) -> bool:
    """Does the given tree of bags witness the k-tree property for m?"""
    n = len(parent)
    if n == 0 or len(bags) != n:
        return False
    roots = [i for i, p in enumerate(parent) if p is None]
    if len(roots) != 1:
        return False
    for i, p in enumerate(parent):
        if p is not None and not (0 <= p < n and p != i):
            return False
    if any(len(b) > k for b in bags):
        return False

    live = [t for ts in m.interp.values() for t in ts]
    for t in live:
        need = set(t)
        if not any(need <= b for b in bags):
            return False

    objects = {o for b in bags for o in b}
    for o in objects:
        nodes = {i for i, b in enumerate(bags) if o in b}
        tops = [i for i in nodes if parent[i] is None or parent[i] not in nodes]
        if len(tops) != 1:
            return False
    return True


def check_restricted_truth_lemma(cut: UnravelledModel) -> ValidationReport:
    """Dependence-atom truth vs type membership at paths of length up to 2.

    Paths of length 3 are exempt: their witnessing extensions were cut
    away, so only the shallow paths keep the biconditional.
    """
    report = fresh_report()
    cl = cut.type_model.closure
    ev = Evaluator(cut.model)
    for i, path in enumerate(cut.paths):
        if path.lh > CUTOFF_LENGTH - 1:
            continue
        sigma = cut.type_model.types[path.last]
        try:
            s_idx = cut.team_position(i)
        except Exception:
            report.add(
                "missing-assignment",
                f"path {path.printed()} has no team row",
                i,
            )
            continue
        for xs in subsets_of(cl.variables):
            for y in cl.variables:
                atom = DAtom(xs, y)
                in_type = sigma.has(cl.index[atom])
                holds = ev.evaluate(s_idx, atom)
                if in_type and not holds:
                    report.add(
                        "membership-without-truth",
                        f"path {path.printed()} carries "
                        f"dep({{{','.join(sorted(xs))}}},{y}) but the model refutes it",
                        (i, xs, y),
                    )
                elif holds and not in_type:
                    report.add(
                        "truth-without-membership",
                        f"path {path.printed()} satisfies "
                        f"dep({{{','.join(sorted(xs))}}},{y}) outside its type",
                        (i, xs, y),
                    )
    return report


def remove_path_assignment(u: UnravelledModel, path_pos: int) -> UnravelledModel:
    """Drop one path's team row; negative-testing helper.

    The paths table is left alone, so truth-lemma checks still know
    about the path whose assignment vanished.
    """
    gone = u.path_values[path_pos]
    team = tuple(a for a in u.model.team if a.values != gone)
    if len(team) == len(u.model.team):
        raise ConstructionError("that path's assignment is not in the team")
    model = replace(u.model, team=team)
    return UnravelledModel(
        model, u.type_model, u.depth, u.paths, u.path_values, u.creators
    )


def dependence_predicate_name(xs: frozenset[str], y: str) -> str:
    return "R({%s},%s)" % (",".join(sorted(xs)), y)


def expand_dependence_predicates(cut: UnravelledModel) -> UnravelledModel:
    """Adjoin one |X|-ary relation per dependence atom, filled from path types."""
    cl = cut.type_model.closure
    variables = cl.variables
    vocab = cut.model.vocab
    var_pos = {v: i for i, v in enumerate(vocab.variables)}

    new_preds = dict(vocab.predicates)
    interp = dict(cut.model.interp)
    for xs in subsets_of(variables):
        cols = [var_pos[x] for x in sorted(xs)]
        for y in variables:
            name = dependence_predicate_name(xs, y)
            if name in new_preds:
                raise ConstructionError(f"predicate name {name!r} already taken")
            new_preds[name] = len(xs)
            atom_idx = cl.index[DAtom(xs, y)]
            tuples = set()
            for i, path in enumerate(cut.paths):
                if cut.type_model.types[path.last].has(atom_idx):
                    tuples.add(tuple(cut.path_values[i][c] for c in cols))
            interp[name] = frozenset(tuples)

    vocab2 = Vocabulary.make(vocab.variables, new_preds)
    model = DependenceModel(vocab2, cut.model.domain, interp, cut.model.team)
    return UnravelledModel(
        model, cut.type_model, cut.depth, cut.paths, cut.path_values, cut.creators
    )


def generate_partial_isos(expanded: UnravelledModel) -> list[PartialIso]:
    """One verified partial isomorphism per depth-3 path, onto its companion.

    The companion of a depth-3 path is the depth-2 path reaching the
    same final type through the empty scope; the map sends the path's
    objects variable-wise onto the companion's.
    """
    fo = encode_structure(expanded.model)
    out = []
    for i, path in enumerate(expanded.paths):
        if path.lh != CUTOFF_LENGTH:
            continue
        companion = GoodPath(path.root, ((frozenset(), path.last),))
        j = expanded.path_index.get(companion)
        if j is None:
            raise ConstructionError(
                f"missing companion path for {path.printed()}"
            )
        mapping = dict(zip(expanded.path_values[i], expanded.path_values[j]))
        p = PartialIso.make(mapping)
        if not is_partial_iso(p, fo):
            raise ConstructionError(
                f"path map for {path.printed()} is not a partial isomorphism"
            )
        out.append(p)
    return out


def check_composition_shape(
    expanded: UnravelledModel, maps: frozenset[PartialIso]
) -> ValidationReport:
    """Whole-assignment witnesses behind partial agreement under each map.

    For every map q and paths with q carrying one assignment onto the
    other over some variable set X, there must be a pair of paths with
    the same final type that q maps assignment-to-assignment, agreeing
    with the original pair on X.  Exhaustive, so only for small models.
    """
    report = fresh_report()
    n = len(expanded.paths)
    variables = expanded.model.vocab.variables
    vals = expanded.path_values
    for q in sorted(maps, key=lambda p: p.pairs):
        full_pairs = []
        for i in range(n):
            image = tuple(q.get(o) for o in vals[i])
            if None in image:
                continue
            for j in range(n):
                if vals[j] == image and (
                    expanded.paths[i].last == expanded.paths[j].last
                ):
                    full_pairs.append((i, j))
        if not full_pairs:
            report.add(
                "composition-shape",
                f"map with {len(q)} pairs carries no whole assignment onto "
                "another with the same final type",
                q.pairs,
            )
            continue
        for i in range(n):
            for j in range(n):
                agreeing = frozenset(
                    v
                    for pos, v in enumerate(variables)
                    if q.get(vals[i][pos]) == vals[j][pos]
                )
                if not agreeing:
                    continue
                ok = any(
                    all(
                        vals[r][pos] == vals[i][pos]
                        and vals[r2][pos] == vals[j][pos]
                        for pos, v in enumerate(variables)
                        if v in agreeing
                    )
                    for r, r2 in full_pairs
                )
                if not ok:
                    report.add(
                        "composition-shape",
                        f"map with {len(q)} pairs links paths {i} and {j} on "
                        f"{sorted(agreeing)} without a same-type full witness",
                        (q.pairs, i, j),
                    )
    return report
