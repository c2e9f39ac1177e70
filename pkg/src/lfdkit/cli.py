"""Command-line front end.

Every subcommand maps onto one library operation, or a composition
documented in its help text.  Exit codes: 0 for success or a true
verdict, 1 for a false verdict (unsatisfiable, not bisimilar, failed
validation), 2 for usage or input errors, 3 for resource caps.  Output
is deterministic; --json switches to machine form with sorted keys.

The environment variable LFD_CAP_OVERRIDE replaces the default
resource caps wherever an explicit flag does not.  Raising caps can
make runs very slow; there is no safety net beyond patience.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from .bisim import check_dependence_bisim, check_inclusion_bisim, check_standard_bisim
from .errors import LfdError, ParseError, ResourceCapError
from .finder import bounded_model_search
from .fol import print_fo, print_tptp, translate
from .herwig import (
    HERWIG_SIZE_CAP,
    SEARCH_BUDGET,
    search_herwig_extension,
    verify_herwig_extension,
)
from .io import (
    dump_json,
    fo_structure_from_json,
    fo_structure_to_json,
    herwig_bundle_from_json,
    herwig_bundle_to_json,
    load_json,
    model_from_json,
    model_to_json,
    partial_isos_from_json,
    relational_from_json,
    type_model_from_json,
    type_model_to_json,
    vocabulary_from_json,
)
from .parser import parse_formula
from .pipeline import run_fmp_pipeline
from .relational import validate_relational
from .semantics import evaluate
from .syntax import free_vars, infer_vocabulary, is_core, modal_depth, print_formula
from .typemodels import POSITIVE_CAP, satisfiable
from .unravel import check_restricted_truth_lemma, cutoff, unravel


def _cap(default: int) -> int:
    raw = os.environ.get("LFD_CAP_OVERRIDE")
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise LfdError(f"LFD_CAP_OVERRIDE must be an integer, got {raw!r}")


def _member_index(spec: str) -> int:
    """Team positions: sN counts from one, a bare integer from zero."""
    if re.fullmatch(r"s[0-9]+", spec):
        idx = int(spec[1:]) - 1
        if idx < 0:
            raise LfdError("team members count from s1")
        return idx
    try:
        return int(spec)
    except ValueError:
        raise LfdError(f"cannot read team position {spec!r}")


def _print_json(data) -> None:
    sys.stdout.write(dump_json(data))


def _load_vocab(path: str | None):
    if path is None:
        return None
    return vocabulary_from_json(load_json(path))


def _report_lines(report) -> list[str]:
    lines = [f"violation [{v.condition}] {v.message}" for v in report.violations]
    lines += [f"warning: {w}" for w in report.warnings]
    return lines


def _report_json(report) -> dict:
    return {
        "ok": report.ok,
        "violations": [
            {"condition": v.condition, "message": v.message}
            for v in report.violations
        ],
        "warnings": list(report.warnings),
    }


def cmd_parse(args) -> int:
    phi = parse_formula(args.formula, _load_vocab(args.vocab))
    canonical = print_formula(phi)
    if args.json:
        _print_json(
            {
                "canonical": canonical,
                "core": is_core(phi),
                "freeVariables": sorted(free_vars(phi)),
                "modalDepth": modal_depth(phi),
            }
        )
    else:
        print(canonical)
    return 0


def cmd_check(args) -> int:
    m = model_from_json(load_json(args.model))
    phi = parse_formula(args.formula, m.vocab)
    idx = _member_index(args.at)
    verdict = evaluate(m, idx, phi)
    if args.json:
        _print_json({"at": idx, "formula": print_formula(phi), "verdict": verdict})
    else:
        print("true" if verdict else "false")
    return 0 if verdict else 1


def cmd_sat(args) -> int:
    phi = parse_formula(args.formula)
    cap = args.cap if args.cap is not None else _cap(POSITIVE_CAP)
    result = satisfiable(phi, cap=cap)
    if result.satisfiable and args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dump_json(type_model_to_json(result.model)))
    if args.json:
        data = {
            "status": result.status,
            "closureSize": len(result.closure.formulas),
            "types": len(result.model.types) if result.model else 0,
        }
        if result.type_index is not None:
            data["typeIndex"] = result.type_index
        _print_json(data)
    else:
        print(result.status)
    return 0 if result.satisfiable else 1


_BISIM_CHECKERS = {
    "dependence": check_dependence_bisim,
    "standard": check_standard_bisim,
    "inclusion": check_inclusion_bisim,
}


def _bisim_entry(m, m2, kind: str, eq_atoms: bool) -> dict:
    checker = _BISIM_CHECKERS[kind]
    if kind == "inclusion":
        z = checker(m, m2)
    else:
        z = checker(m, m2, eq_atoms=eq_atoms)
    return {
        "bisimilar": z is not None,
        "pairs": sorted(z.pairs) if z else [],
        "stats": z.stats.as_dict() if z else None,
    }


def cmd_bisim(args) -> int:
    m = model_from_json(load_json(args.left))
    m2 = model_from_json(load_json(args.right))
    if args.compare:
        dep = _bisim_entry(m, m2, "dependence", args.eq_atoms)
        std = _bisim_entry(m, m2, "standard", args.eq_atoms)
        dep_cost = dep["stats"]["closureComputations"] if dep["stats"] else 0
        std_cost = std["stats"]["closureComputations"] if std["stats"] else 0
        data = {
            "dependence": dep,
            "standard": std,
            "agree": dep["bisimilar"] == std["bisimilar"],
            "costDominates": dep_cost <= std_cost,
        }
        if args.json:
            _print_json(data)
        else:
            for kind in ("dependence", "standard"):
                entry = data[kind]
                cost = entry["stats"]["closureComputations"] if entry["stats"] else 0
                print(
                    f"{kind}: "
                    + ("bisimilar" if entry["bisimilar"] else "not bisimilar")
                    + f" (closure computations: {cost})"
                )
        return 0 if dep["bisimilar"] else 1
    entry = _bisim_entry(m, m2, args.kind, args.eq_atoms)
    if args.json:
        _print_json(entry)
    else:
        print("bisimilar" if entry["bisimilar"] else "not bisimilar")
    return 0 if entry["bisimilar"] else 1


def cmd_translate(args) -> int:
    vocab = _load_vocab(args.vocab)
    phi = parse_formula(args.formula, vocab)
    fo = translate(phi, vocab or infer_vocabulary(phi))
    if args.json:
        _print_json({"fo": print_fo(fo), "tptp": print_tptp(fo)})
    else:
        print(print_tptp(fo) if args.tptp else print_fo(fo))
    return 0


def _unravelled_json(u) -> dict:
    return {
        "depth": u.depth,
        "model": model_to_json(u.model),
        "paths": [p.printed() for p in u.paths],
        "branching": u.branching_degree(),
    }


def cmd_unravel(args) -> int:
    tm = type_model_from_json(load_json(args.typemodel))
    u = unravel(tm, args.root, args.depth)
    data = _unravelled_json(u)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dump_json(data))
    if args.json:
        _print_json(
            {
                "paths": len(u.paths),
                "objects": len(u.model.domain),
                "team": len(u.model.team),
                "branching": u.branching_degree(),
            }
        )
    else:
        print(
            f"{len(u.paths)} paths, {len(u.model.domain)} objects, "
            f"team of {len(u.model.team)}, branching {u.branching_degree()}"
        )
    return 0


def cmd_cutoff(args) -> int:
    tm = type_model_from_json(load_json(args.typemodel))
    u = unravel(tm, args.root, args.depth)
    cut = cutoff(u)
    truth = check_restricted_truth_lemma(cut)
    data = _unravelled_json(cut)
    data["truthLemma"] = _report_json(truth)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dump_json(data))
    if args.json:
        _print_json(
            {
                "paths": len(cut.paths),
                "objects": len(cut.model.domain),
                "team": len(cut.model.team),
                "truthLemmaClean": truth.ok,
            }
        )
    else:
        print(
            f"{len(cut.paths)} paths kept, {len(cut.model.domain)} objects; "
            + ("truth check clean" if truth.ok else "truth check FAILED")
        )
        for line in _report_lines(truth):
            print(line)
    return 0 if truth.ok else 1


def cmd_herwig_verify(args) -> int:
    base = fo_structure_from_json(load_json(args.base))
    extension = fo_structure_from_json(load_json(args.extension))
    ps, hats = herwig_bundle_from_json(load_json(args.maps))
    report = verify_herwig_extension(base, ps, extension, hats)
    if args.json:
        _print_json(_report_json(report))
    else:
        print("pass" if report.ok else "fail")
        for line in _report_lines(report):
            print(line)
    return 0 if report.ok else 1


def _load_chosen_maps(path: str):
    """Accept either a bare map list or a maps+hats bundle file."""
    data = load_json(path)
    if isinstance(data, dict):
        data = data.get("maps", [])
    return partial_isos_from_json(data)


def cmd_herwig_search(args) -> int:
    base = fo_structure_from_json(load_json(args.base))
    ps = _load_chosen_maps(args.maps) if args.maps else []
    result = search_herwig_extension(
        base,
        ps,
        args.max_size,
        budget=args.budget if args.budget is not None else _cap(SEARCH_BUDGET),
        size_cap=_cap(HERWIG_SIZE_CAP),
    )
    if result.found and args.out:
        bundle = {
            "structure": fo_structure_to_json(result.structure),
            "automorphisms": herwig_bundle_to_json(ps, result.hats),
        }
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dump_json(bundle))
    if args.json:
        data = {
            "found": result.found,
            "capped": result.capped,
            "examined": result.examined,
            "reason": result.reason,
        }
        if result.found:
            data["size"] = len(result.structure.domain)
        _print_json(data)
    else:
        if result.found:
            print(f"found extension with {len(result.structure.domain)} elements")
        else:
            print(f"no extension: {result.reason}")
    if result.found:
        return 0
    return 3 if result.capped else 1


def cmd_findmodel(args) -> int:
    phi = parse_formula(args.formula)
    witness = bounded_model_search(phi, args.max_domain, args.max_team)
    if witness is None:
        if args.json:
            _print_json({"found": False})
        else:
            print(
                f"no model within domain {args.max_domain}, team {args.max_team}"
            )
        return 1
    model, assignment = witness
    data = {
        "found": True,
        "model": model_to_json(model),
        "assignment": assignment.as_dict(),
    }
    if args.json:
        _print_json(data)
    else:
        print(
            f"model with {len(model.domain)} objects, team of {len(model.team)}; "
            f"true at {assignment.as_dict()}"
        )
    return 0


def cmd_relational_validate(args) -> int:
    r = relational_from_json(load_json(args.file))
    report = validate_relational(r, standard=not args.general)
    if args.json:
        _print_json(_report_json(report))
    else:
        print("pass" if report.ok else "fail")
        for line in _report_lines(report):
            print(line)
    return 0 if report.ok else 1


def cmd_pipeline_fmp(args) -> int:
    phi = parse_formula(args.formula)
    result = run_fmp_pipeline(
        phi,
        cap=_cap(POSITIVE_CAP),
        attempt_herwig=args.herwig,
    )
    data: dict = {"status": result.status, "stages": result.stages}
    if result.reason:
        data["reason"] = result.reason
    if result.status == "SAT":
        data["certificate"] = {
            "model": model_to_json(result.model),
            "assignment": result.assignment.as_dict(),
            "evidence": result.evidence,
        }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dump_json(data))
    if args.json:
        _print_json(data)
    else:
        for stage in result.stages:
            bits = ", ".join(f"{k}={v}" for k, v in stage.items() if k != "stage")
            print(f"{stage['stage']}: {bits}")
        if result.status == "SAT":
            print(
                f"SAT: certificate model with {len(result.model.domain)} objects, "
                f"true at {result.assignment.as_dict()}"
            )
        else:
            print(f"{result.status}: {result.reason}")
    return result.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lfd",
        description="Tools for the logic of functional dependence.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    p = add("parse", cmd_parse, "parse a formula and print its canonical form")
    p.add_argument("formula")
    p.add_argument("--vocab", help="vocabulary JSON restricting names")

    p = add("check", cmd_check, "evaluate a formula at one team member")
    p.add_argument("model", help="dependence model JSON")
    p.add_argument("formula")
    p.add_argument("--at", required=True, help="team member: s1-style or 0-based index")

    p = add("sat", cmd_sat, "decide satisfiability by type elimination")
    p.add_argument("formula")
    p.add_argument("--cap", type=int, help="positive-formula cap override")
    p.add_argument("--out", help="write the witness type model JSON to this file")

    p = add("bisim", cmd_bisim, "compute the largest bisimulation between two models")
    p.add_argument("left", help="dependence model JSON")
    p.add_argument("right", help="dependence model JSON")
    p.add_argument(
        "--kind",
        choices=sorted(_BISIM_CHECKERS),
        default="dependence",
        help="which notion to check",
    )
    p.add_argument(
        "--compare",
        action="store_true",
        help="run the dependence and standard checkers and report both costs",
    )
    p.add_argument(
        "--eq-atoms",
        action="store_true",
        help="extend atomic harmony with variable equalities",
    )

    p = add("translate", cmd_translate, "first-order translation of a formula")
    p.add_argument("formula")
    p.add_argument("--vocab", help="vocabulary JSON restricting names")
    p.add_argument("--tptp", action="store_true", help="TPTP-style output")

    p = add("unravel", cmd_unravel, "unravel a type model along good paths")
    p.add_argument("typemodel", help="type model JSON")
    p.add_argument("--root", type=int, default=0, help="index of the root type")
    p.add_argument("--depth", type=int, default=3, help="maximum path length")
    p.add_argument("--out", help="write the unravelled artifact to this file")

    p = add(
        "cutoff",
        cmd_cutoff,
        "unravel, cut at length 3, and check the restricted truth conditions",
    )
    p.add_argument("typemodel", help="type model JSON")
    p.add_argument("--root", type=int, default=0, help="index of the root type")
    p.add_argument("--depth", type=int, default=3, help="unravelling depth before the cut")
    p.add_argument("--out", help="write the cut artifact to this file")

    p = add(
        "herwig-verify",
        cmd_herwig_verify,
        "audit a claimed automorphism extension against all three conditions",
    )
    p.add_argument("base", help="base structure JSON")
    p.add_argument("extension", help="extension structure JSON")
    p.add_argument("--maps", required=True, help="bundle JSON with maps and hats")

    p = add(
        "herwig-search",
        cmd_herwig_search,
        "search for an extension in which the given maps become automorphisms",
    )
    p.add_argument("base", help="base structure JSON")
    p.add_argument("--maps", help="JSON list of partial maps")
    p.add_argument("--max-size", type=int, default=2, help="extra elements to allow")
    p.add_argument("--budget", type=int, help="candidate budget override")
    p.add_argument("--out", help="write the found extension bundle to this file")

    p = add("findmodel", cmd_findmodel, "exhaustive small-model search")
    p.add_argument("formula")
    p.add_argument("--max-domain", type=int, default=3, help="largest domain size")
    p.add_argument("--max-team", type=int, default=4, help="largest team size")

    p = add(
        "relational-validate",
        cmd_relational_validate,
        "check the frame conditions of a relational model",
    )
    p.add_argument("file", help="relational model JSON")
    p.add_argument(
        "--general",
        action="store_true",
        help="check only the general-model conditions",
    )

    p = add(
        "pipeline-fmp",
        cmd_pipeline_fmp,
        "decide, unravel, cut, expand, collect maps, and emit a finite model",
    )
    p.add_argument("formula")
    p.add_argument(
        "--herwig",
        action="store_true",
        help="also attempt the automorphism-extension search when small enough",
    )
    p.add_argument("--out", help="write the certificate JSON to this file")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 3
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (LfdError, OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
