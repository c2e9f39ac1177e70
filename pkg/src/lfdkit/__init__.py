"""Toolkit for the logic of functional dependence.

Formulas are evaluated at single assignments inside a team; dependence
atoms and quantifiers read patterns off the whole team.  The package
covers parsing, evaluation, type-based satisfiability, bisimulation
checking, first-order translation, good-path unravelling, automorphism
extension machinery, and the modal relational semantics.
"""

from .bisim import (
    BisimRelation,
    BisimStats,
    check_dependence_bisim,
    check_inclusion_bisim,
    check_standard_bisim,
    invariance_probe,
    verify_bisimulation,
)
from .errors import (
    AssignmentNotInTeam,
    ConstructionError,
    EvaluationError,
    LfdError,
    ParseError,
    ResourceCapError,
    UnsupportedAtomError,
    VocabularyError,
)
from .finder import bounded_model_search
from .fol import (
    FOStructure,
    decode_structure,
    encode_structure,
    fo_eval,
    print_fo,
    print_tptp,
    translate,
)
from .herwig import (
    PartialIso,
    group_closure,
    inverse_closure,
    is_automorphism,
    is_partial_iso,
    search_herwig_extension,
    verify_herwig_extension,
)
from .parser import parse_formula
from .pipeline import PipelineResult, run_fmp_pipeline
from .relational import (
    History,
    HistoryModel,
    RelationalModel,
    build_histories,
    check_link_packed_free,
    forbidden_cycles,
    modal_eval,
    to_relational,
    transitive_closure_relations,
    validate_relational,
)
from .semantics import (
    Assignment,
    DependenceModel,
    Evaluator,
    dependence_closure_at,
    evaluate,
    extract_type,
    induced_type_model,
    make_model,
    validate_model,
)
from .syntax import (
    And,
    ClosureSet,
    DAtom,
    DQuant,
    Eq,
    Formula,
    Incl,
    Not,
    PredAtom,
    Vocabulary,
    closure,
    free_vars,
    infer_vocabulary,
    print_formula,
)
from .typemodels import (
    PsiType,
    SatResult,
    TypeModel,
    ValidationReport,
    enumerate_psi_types,
    is_psi_type,
    satisfiable,
    type_sim,
    validate_type_model,
)
from .unravel import (
    GoodPath,
    UnravelledModel,
    check_composition_shape,
    check_restricted_truth_lemma,
    cutoff,
    expand_dependence_predicates,
    generate_partial_isos,
    tree_decomposition,
    unravel,
    verify_k_tree,
)

__version__ = "0.1.0"
