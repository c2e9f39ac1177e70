"""Partial isomorphism extension audits and the tiny extension search."""

import pytest

from lfdkit.errors import ConstructionError, ResourceCapError
from lfdkit.fol import FOStructure
from lfdkit.herwig import (
    PartialIso,
    group_closure,
    inverse_closure,
    is_automorphism,
    is_partial_iso,
    search_herwig_extension,
    verify_herwig_extension,
)
from lfdkit.io import fo_structure_from_json, herwig_bundle_from_json, load_json

from _corpus import FIXTURES

BASE = fo_structure_from_json(load_json(FIXTURES / "herwig1-base.json"))
EXT = fo_structure_from_json(load_json(FIXTURES / "herwig1-extension.json"))
MAPS, HATS = herwig_bundle_from_json(load_json(FIXTURES / "herwig1-maps.json"))


def test_partial_iso_construction():
    p = PartialIso.make({1: 2, 3: 4})
    assert p.domain == {1, 3}
    assert p.codomain == {2, 4}
    assert p.get(1) == 2
    assert p.get(9) is None
    assert len(p) == 2
    with pytest.raises(ConstructionError):
        PartialIso.make({1: 5, 2: 5})
    with pytest.raises(ConstructionError):
        p.apply(9)


def test_partial_iso_algebra():
    p = PartialIso.make({1: 2})
    q = PartialIso.make({2: 3})
    assert q.compose(p) == PartialIso.make({1: 3})
    assert p.compose(q) == PartialIso.make({})
    assert p.inverse() == PartialIso.make({2: 1})
    ident = PartialIso.identity([1, 2, 3])
    assert ident.extends(p.inverse().inverse()) is False
    assert PartialIso.make({1: 2, 3: 4}).extends(p)
    assert ident.is_permutation_of([1, 2, 3])


def test_is_partial_iso_respects_relations():
    s = FOStructure(domain=(1, 2, 3), relations={"E": frozenset({(1, 2)})})
    assert is_partial_iso(PartialIso.make({1: 1, 2: 2}), s)
    # sends an edge onto a non-edge
    assert not is_partial_iso(PartialIso.make({1: 2, 2: 3}), s)
    # reflects a non-edge onto an edge
    assert not is_partial_iso(PartialIso.make({3: 1, 1: 2}), s)
    # out-of-domain values
    assert not is_partial_iso(PartialIso.make({1: 9}), s)


def test_is_automorphism():
    cyc = FOStructure(
        domain=(1, 2, 3),
        relations={"E": frozenset({(1, 2), (2, 3), (3, 1)})},
    )
    rot = PartialIso.make({1: 2, 2: 3, 3: 1})
    assert is_automorphism(rot, cyc)
    assert not is_automorphism(PartialIso.make({1: 2}), cyc)
    flip = PartialIso.make({1: 1, 2: 3, 3: 2})
    assert not is_automorphism(flip, cyc)


def test_inverse_closure_of_single_link():
    closed = inverse_closure([PartialIso.make({1: 2})])
    assert len(closed) == 5
    assert sorted(len(p) for p in closed) == [0, 1, 1, 1, 1]
    assert PartialIso.make({2: 1}) in closed
    assert PartialIso.make({1: 1}) in closed
    assert PartialIso.make({2: 2}) in closed
    assert PartialIso.make({}) in closed


def test_group_closure_of_rotation():
    rot = PartialIso.make({1: 2, 2: 3, 3: 1})
    group = group_closure([rot], [1, 2, 3])
    assert len(group) == 3
    assert PartialIso.identity([1, 2, 3]) in group
    assert rot.inverse() in group


def test_fixture_extension_passes():
    assert EXT.domain == (1, 2, 3)
    report = verify_herwig_extension(BASE, MAPS, EXT, HATS)
    assert report.ok


def test_substructure_mismatch_short_circuits():
    shrunk = FOStructure(domain=(1, 2, 3), relations={"E": frozenset()})
    report = verify_herwig_extension(BASE, MAPS, shrunk, HATS)
    assert not report.ok
    assert {v.condition for v in report.violations} == {"substructure"}


def test_corrupted_hat_fails_condition_i():
    # removing an edge from the extension demotes the hat to a non-automorphism
    dropped = FOStructure(
        domain=EXT.domain,
        relations={"E": EXT.relations["E"] - {(2, 3)}},
    )
    report = verify_herwig_extension(BASE, MAPS, dropped, HATS)
    assert not report.ok
    assert {v.condition for v in report.violations} == {"i"}


def test_uncovered_element_fails_condition_ii():
    bigger = FOStructure(
        domain=EXT.domain + (4,),
        relations=EXT.relations,
    )
    hat = HATS[MAPS[0]]
    hats = {MAPS[0]: PartialIso.make({**hat.as_dict, 4: 4})}
    report = verify_herwig_extension(BASE, MAPS, bigger, hats)
    assert not report.ok
    assert {v.condition for v in report.violations} == {"ii"}
    assert any(v.witness == (4,) for v in report.violations)


def test_duplicate_witnesses_fail_condition_iii():
    pairs = FOStructure(
        domain=(1, 2, 3, 4),
        relations={"E": frozenset({(1, 2), (2, 1), (3, 4), (4, 3)})},
    )
    swap = PartialIso.make({1: 2, 2: 1, 3: 4, 4: 3})
    q1 = PartialIso.make({1: 2})
    q2 = PartialIso.make({1: 2, 3: 4})
    report = verify_herwig_extension(pairs, [q1, q2], pairs, {q1: swap, q2: swap})
    assert not report.ok
    assert {v.condition for v in report.violations} == {"iii"}
    assert any(
        "2 distinct maps send 1 to 2 alongside the same group element"
        == v.message
        for v in report.violations
    )


def test_search_recovers_the_three_cycle():
    result = search_herwig_extension(BASE, MAPS, max_size=1)
    assert result.found
    assert not result.capped
    assert result.examined == 9
    assert len(result.structure.domain) == 3
    assert verify_herwig_extension(
        BASE, MAPS, result.structure, result.hats
    ).ok


def test_search_rejects_oversized_requests():
    with pytest.raises(ResourceCapError):
        search_herwig_extension(BASE, MAPS, max_size=6)


def test_search_rejects_team_structures():
    teamed = FOStructure(
        domain=(1, 2),
        relations={"E": frozenset({(1, 2)})},
        team=frozenset({(1, 2)}),
    )
    with pytest.raises(ConstructionError):
        search_herwig_extension(teamed, MAPS, max_size=1)


def test_search_budget_cap_reports_capped():
    result = search_herwig_extension(BASE, MAPS, max_size=1, budget=3)
    assert result.capped
    assert not result.found
    assert result.examined == 3
    assert result.reason == "budget exhausted"


def test_search_needs_arities_for_empty_relations():
    empty = FOStructure(domain=(1, 2), relations={"E": frozenset()})
    p = PartialIso.make({1: 2})
    with pytest.raises(ConstructionError):
        search_herwig_extension(empty, [p], max_size=1)
    result = search_herwig_extension(empty, [p], max_size=1, arities={"E": 2})
    assert result.found
