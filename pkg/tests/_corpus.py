"""Deterministic random corpus shared by the oracle and acceptance tests.

Everything is driven by fixed seeds so reruns see byte-identical inputs.
Models stay desk-scale: at most three objects, four team rows, two
variables, one unary and one binary predicate.
"""

from __future__ import annotations

import random
from itertools import product
from pathlib import Path

from lfdkit import make_model, parse_formula, validate_model
from lfdkit.io import load_json, model_from_json
from lfdkit.syntax import And, DAtom, DQuant, Formula, Not, PredAtom

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

VARIABLES = ("x", "y")
PREDICATES = {"P": 1, "R": 2}

MODEL_SEED = 20240811
FORMULA_SEED = 20240812

# satisfiability suite: formula text paired with its expected verdict,
# confirmed by exhaustive bounded search over domain <= 3, team <= 4
SAT_SUITE = [
    ("P(x) & !P(x)", False),
    ("dep({x},y) & !dep({y},x)", True),
    ("E{}(P(x)) & D{}(!P(x))", False),
    ("P(x)", True),
    ("!P(x)", True),
    ("dep({},y)", True),
    ("dep({},y) & E{}(!dep({},y))", False),
    ("E{}(P(x)) & E{}(!P(x))", True),
    ("D{x}(P(x))", True),
    ("D{x}(P(y)) & !P(y)", False),
    ("E{x}(!P(x)) & P(x)", False),
    ("E{x}(!P(y)) & P(y) & dep({x},y)", False),
    ("E{x}(!P(y)) & P(y)", True),
    ("dep({x},y) & E{x}(!dep({x},y))", False),
    ("E{}(dep({},x)) & !dep({},x)", False),
    ("R(x,y) & dep({x},y) & E{y}(!R(x,y))", True),
    ("D{y}(R(x,y)) & !R(x,y)", False),
    ("E{}(dep({x},y) & !dep({y},x))", True),
    ("dep({},x) & E{}(!P(x)) & P(x)", False),
    ("D{}(dep({x},y)) & E{}(!P(x))", True),
]


def load_fixture_model(name: str):
    return model_from_json(load_json(str(FIXTURES / f"{name}.json")))


def random_models(count: int = 200, seed: int = MODEL_SEED):
    """Valid two-variable models over P/1 and R/2, deterministic order."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        size = rng.randint(1, 3)
        domain = list(range(size))
        rows = list(product(domain, repeat=len(VARIABLES)))
        team = rng.sample(rows, rng.randint(1, min(4, len(rows))))
        interp = {
            "P": [(o,) for o in domain if rng.random() < 0.5],
            "R": [t for t in product(domain, repeat=2) if rng.random() < 0.4],
        }
        m = make_model(
            VARIABLES,
            PREDICATES,
            domain,
            interp,
            [dict(zip(VARIABLES, row)) for row in team],
        )
        if validate_model(m).ok:
            out.append(m)
    return out


def _random_formula(rng: random.Random, depth: int) -> Formula:
    roll = rng.random()
    if depth == 0 or roll < 0.3:
        kind = rng.randrange(3)
        if kind == 0:
            return PredAtom("P", (rng.choice(VARIABLES),))
        if kind == 1:
            return PredAtom("R", (rng.choice(VARIABLES), rng.choice(VARIABLES)))
        xs = frozenset(v for v in VARIABLES if rng.random() < 0.5)
        return DAtom(xs, rng.choice(VARIABLES))
    if roll < 0.5:
        return Not(_random_formula(rng, depth - 1))
    if roll < 0.75:
        return And(_random_formula(rng, depth - 1), _random_formula(rng, depth - 1))
    xs = frozenset(v for v in VARIABLES if rng.random() < 0.5)
    return DQuant(xs, _random_formula(rng, depth - 1))


def random_formulas(count: int = 50, seed: int = FORMULA_SEED):
    rng = random.Random(seed)
    return [_random_formula(rng, 3) for _ in range(count)]


def model_pairs(count: int = 100):
    """Pairs for the bisimulation comparison; pair 0 is the isomorphic
    fixture pair, so at least one bisimilar instance with three rows is
    always present."""
    pairs = [(load_fixture_model("model-ar"), load_fixture_model("model-b"))]
    ms = random_models(2 * (count - 1), seed=MODEL_SEED + 1)
    pairs.extend((ms[2 * i], ms[2 * i + 1]) for i in range(count - 1))
    return pairs


def suite_formulas():
    return [(text, parse_formula(text), expected) for text, expected in SAT_SUITE]
