#!/usr/bin/env python3
"""Verify and search finite structure extensions with automorphism lifts.

Given a structure and a set of partial isomorphisms, an extension is a
bigger structure in which every chosen map grows into a full
automorphism.  The verifier checks the four conditions separately; the
searcher enumerates candidate extensions up to a size cap.
"""

from pathlib import Path

from lfdkit.fol import FOStructure
from lfdkit.herwig import (
    PartialIso,
    search_herwig_extension,
    verify_herwig_extension,
)
from lfdkit.io import fo_structure_from_json, herwig_bundle_from_json, load_json

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
base = fo_structure_from_json(load_json(FIXTURES / "herwig1-base.json"))
ext = fo_structure_from_json(load_json(FIXTURES / "herwig1-extension.json"))
maps, hats = herwig_bundle_from_json(load_json(FIXTURES / "herwig1-maps.json"))

print(f"base: domain {base.domain}, edges {sorted(base.relations['E'])}")
print(f"partial map: {maps[0].as_dict}")
print(f"extension: domain {ext.domain}, hat {hats[maps[0]].as_dict}")

report = verify_herwig_extension(base, maps, ext, hats)
print("verifier:", "pass" if report.ok else "fail")

# breaking one edge demotes the hat to a mere bijection
broken = FOStructure(ext.domain, {"E": ext.relations["E"] - {(2, 3)}})
report = verify_herwig_extension(base, maps, broken, hats)
print("after dropping edge (2,3):", [v.condition for v in report.violations])

found = search_herwig_extension(base, maps, max_size=3)
print(
    f"search: found={found.found} size={len(found.structure.domain)} "
    f"examined={found.examined}"
)
print(
    "searched extension verifies:",
    verify_herwig_extension(base, maps, found.structure, found.hats).ok,
)
