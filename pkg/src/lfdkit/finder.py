"""Exhaustive search for small satisfying dependence models.

This is the independent route to satisfiability verdicts: enumerate
every model shape up to the caps and evaluate directly, sharing nothing
with the type-based decision procedure.  Two economies keep it fast
without giving up completeness within the caps: teams are enumerated
only up to a renaming of domain objects, and predicate extensions are
chosen only over tuples a team member can actually produce (anything
else never influences truth).
"""

from __future__ import annotations

from itertools import combinations, permutations, product

from .semantics import Assignment, DependenceModel, Evaluator
from .syntax import Formula, Vocabulary, infer_vocabulary

OBJECT_NAMES = ("a", "b", "c", "d", "e", "f", "g")


def _canonical_team(rows: tuple[tuple, ...], domain: tuple) -> bool:
    """Is this team-set minimal among its images under object renamings?"""
    base = tuple(sorted(rows))
    for perm in permutations(domain):
        swap = dict(zip(domain, perm))
        image = tuple(sorted(tuple(swap[v] for v in row) for row in rows))
        if image < base:
            return False
    return True


def bounded_model_search(
    phi: Formula,
    max_domain: int,
    max_team: int,
    vocab: Vocabulary | None = None,
) -> tuple[DependenceModel, Assignment] | None:
    """First small model and team member satisfying the formula, if any.

    Deterministic: domains grow from one object up, teams and predicate
    extensions are swept in lexicographic order, and the first hit wins.
    Exhaustive within the caps, so None refutes satisfiability there.
    """
    vocab = vocab or infer_vocabulary(phi)
    k = len(vocab.variables)
    for size in range(1, max_domain + 1):
        domain = OBJECT_NAMES[:size]
        rows = sorted(product(domain, repeat=k))
        if k == 0 and size > 1:
            break
        for team_size in range(1, max_team + 1):
            for team_rows in combinations(rows, team_size):
                values = {v for row in team_rows for v in row}
                if k > 0 and values != set(domain):
                    continue
                if not _canonical_team(team_rows, domain):
                    continue
                witness = _sweep_interpretations(phi, vocab, domain, team_rows)
                if witness is not None:
                    return witness
    return None


def _sweep_interpretations(
    phi: Formula,
    vocab: Vocabulary,
    domain: tuple,
    team_rows: tuple[tuple, ...],
) -> tuple[DependenceModel, Assignment] | None:
    team = tuple(Assignment(vocab.variables, row) for row in team_rows)
    vidx = vocab.var_index

    reachable: list[tuple[str, list[tuple]]] = []
    for pred, arity in vocab.predicates:
        tuples = sorted(
            {
                tuple(row[vidx[x]] for x in args)
                for row in team_rows
                for args in product(vocab.variables, repeat=arity)
            }
        )
        reachable.append((pred, tuples))

    masks = [range(1 << len(ts)) for _, ts in reachable]
    for combo in product(*masks):
        interp = {}
        for (pred, tuples), mask in zip(reachable, combo):
            interp[pred] = frozenset(
                t for i, t in enumerate(tuples) if mask >> i & 1
            )
        model = DependenceModel(vocab, domain, interp, team)
        ev = Evaluator(model)
        for i in range(len(team)):
            if ev.evaluate(i, phi):
                return model, team[i]
    return None
