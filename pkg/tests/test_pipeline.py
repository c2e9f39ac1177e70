"""The satisfiability-to-certificate chain."""

from lfdkit import evaluate, parse_formula
from lfdkit.pipeline import run_fmp_pipeline

STAGES = ["satisfiable", "unravel", "cutoff", "expand", "herwig-search", "certificate"]


def test_sat_run_walks_every_stage():
    result = run_fmp_pipeline(parse_formula("dep({x},y) & !dep({y},x)"))
    assert result.status == "SAT"
    assert result.exit_code == 0
    assert [s["stage"] for s in result.stages] == STAGES
    assert result.evidence == {
        "source": "cut-off",
        "evalTrue": True,
        "rootTypeMatches": True,
        "maps": 16,
        "truthLemmaClean": True,
    }
    assert len(result.cut.model.domain) == 12
    assert evaluate(
        result.model, result.model.index_of(result.assignment),
        parse_formula("dep({x},y) & !dep({y},x)"),
    )


def test_single_variable_run_has_four_maps():
    result = run_fmp_pipeline(parse_formula("P(x)"))
    assert result.status == "SAT"
    assert result.evidence["maps"] == 4
    assert result.evidence["evalTrue"]


def test_unsat_stops_after_the_decision():
    result = run_fmp_pipeline(parse_formula("P(x) & !P(x)"))
    assert result.status == "UNSAT"
    assert result.exit_code == 1
    assert [s["stage"] for s in result.stages] == ["satisfiable"]
    assert result.reason == "no type contains the formula after elimination"
    assert result.model is None


def test_enumeration_cap_reports_capped():
    result = run_fmp_pipeline(parse_formula("dep({x},y) & !dep({y},x)"), cap=2)
    assert result.status == "CAPPED"
    assert result.exit_code == 3
    assert result.stages == [
        {"stage": "satisfiable", "capped": result.reason}
    ]
    assert "cap" in result.reason


def test_requested_extension_search_runs_on_tiny_models():
    result = run_fmp_pipeline(parse_formula("P(x)"), attempt_herwig=True)
    hw = [s for s in result.stages if s["stage"] == "herwig-search"]
    assert hw == [
        {"stage": "herwig-search", "found": True, "capped": False, "examined": 2}
    ]
    assert result.herwig.found
    assert result.herwig.structure is not None


def test_requested_extension_search_skips_oversized_models():
    result = run_fmp_pipeline(
        parse_formula("dep({x},y) & !dep({y},x)"), attempt_herwig=True
    )
    hw = [s for s in result.stages if s["stage"] == "herwig-search"][0]
    assert hw["skipped"] == "12 elements exceed the size cap"
    assert result.herwig is None
    assert result.status == "SAT"


def test_unrequested_extension_search_is_marked_skipped():
    result = run_fmp_pipeline(parse_formula("P(x)"))
    hw = [s for s in result.stages if s["stage"] == "herwig-search"][0]
    assert hw["skipped"] == "not requested"
