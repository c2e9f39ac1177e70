"""End-to-end finite-model pipeline.

Chains the decision procedure with the constructive machinery: decide
satisfiability, unravel the witness type model along good paths, cut
off at length 3, adjoin dependence predicates, collect the depth-3
partial isomorphisms, optionally search for an automorphism-closing
extension, and emit a small model certificate with the assignment that
makes the formula true.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ResourceCapError
from .finder import bounded_model_search
from .fol import FOStructure
from .herwig import HERWIG_SIZE_CAP, HerwigSearchResult, search_herwig_extension
from .semantics import Assignment, DependenceModel, evaluate, extract_type
from .syntax import Formula
from .typemodels import POSITIVE_CAP, SatResult, satisfiable
from .unravel import (
    UnravelledModel,
    check_restricted_truth_lemma,
    cutoff,
    expand_dependence_predicates,
    generate_partial_isos,
    unravel,
)


@dataclass
class PipelineResult:
    """Outcome of the chain, with one log entry per completed stage."""

    status: str  # "SAT" | "UNSAT" | "CAPPED"
    stages: list[dict] = field(default_factory=list)
    sat: SatResult | None = None
    cut: UnravelledModel | None = None
    expanded: UnravelledModel | None = None
    herwig: HerwigSearchResult | None = None
    model: DependenceModel | None = None
    assignment: Assignment | None = None
    evidence: dict = field(default_factory=dict)
    reason: str = ""

    @property
    def exit_code(self) -> int:
        if self.status == "SAT":
            return 0
        if self.status == "UNSAT":
            return 1
        return 3


def run_fmp_pipeline(
    phi: Formula,
    cap: int = POSITIVE_CAP,
    attempt_herwig: bool = False,
    herwig_max_size: int = 2,
    herwig_size_cap: int = HERWIG_SIZE_CAP,
    search_domain: int = 3,
    search_team: int = 4,
) -> PipelineResult:
    result = PipelineResult(status="CAPPED")
    try:
        sat = satisfiable(phi, cap=cap)
    except ResourceCapError as exc:
        result.reason = str(exc)
        result.stages.append({"stage": "satisfiable", "capped": str(exc)})
        return result
    result.sat = sat
    result.stages.append(
        {
            "stage": "satisfiable",
            "status": sat.status,
            "closureSize": len(sat.closure.formulas),
            "types": len(sat.model.types) if sat.model else 0,
        }
    )
    if not sat.satisfiable:
        result.status = "UNSAT"
        result.reason = "no type contains the formula after elimination"
        return result

    u = unravel(sat.model, sat.type_index, 3)
    result.stages.append(
        {
            "stage": "unravel",
            "paths": len(u.paths),
            "objects": len(u.model.domain),
            "team": len(u.model.team),
        }
    )
    cut = cutoff(u)
    result.cut = cut
    truth = check_restricted_truth_lemma(cut)
    result.stages.append(
        {
            "stage": "cutoff",
            "paths": len(cut.paths),
            "objects": len(cut.model.domain),
            "truthLemmaClean": truth.ok,
        }
    )
    expanded = expand_dependence_predicates(cut)
    maps = generate_partial_isos(expanded)
    result.expanded = expanded
    result.stages.append(
        {
            "stage": "expand",
            "predicates": len(expanded.model.vocab.predicates),
            "maps": len(maps),
        }
    )

    if attempt_herwig:
        base = FOStructure(
            expanded.model.domain, dict(expanded.model.interp)
        )
        if len(base.domain) + herwig_max_size > herwig_size_cap:
            result.stages.append(
                {
                    "stage": "herwig-search",
                    "skipped": f"{len(base.domain)} elements exceed the size cap",
                }
            )
        else:
            hw = search_herwig_extension(
                base, maps, herwig_max_size, size_cap=herwig_size_cap
            )
            result.herwig = hw
            result.stages.append(
                {
                    "stage": "herwig-search",
                    "found": hw.found,
                    "capped": hw.capped,
                    "examined": hw.examined,
                }
            )
    else:
        result.stages.append({"stage": "herwig-search", "skipped": "not requested"})

    root_assignment = cut.assignment_of(0)
    root_true = evaluate(cut.model, cut.team_position(0), phi)
    if truth.ok and root_true:
        result.model = cut.model
        result.assignment = root_assignment
        source = "cut-off"
    else:
        witness = bounded_model_search(
            phi, search_domain, search_team, vocab=None
        )
        if witness is None:
            result.reason = (
                "cut-off certificate failed and no model exists within "
                f"domain {search_domain}, team {search_team}"
            )
            result.stages.append({"stage": "certificate", "capped": result.reason})
            return result
        result.model, result.assignment = witness
        source = "bounded-search"

    result.status = "SAT"
    seed_type = sat.model.types[sat.type_index]
    cert_type = extract_type(
        cut.model, cut.team_position(0), sat.closure
    )
    result.evidence = {
        "source": source,
        "evalTrue": evaluate(
            result.model, result.model.index_of(result.assignment), phi
        ),
        "rootTypeMatches": cert_type.bits == seed_type.bits,
        "maps": len(maps),
        "truthLemmaClean": truth.ok,
    }
    result.stages.append({"stage": "certificate", "source": source})
    return result
