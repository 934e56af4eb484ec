"""Proof kernel, finite Kripke-model checker, and bounded decision
procedure for the strictly positive quantified modal logic QRC1."""

from .language import (
    All,
    And,
    Const,
    Diam,
    Formula,
    Pred,
    Sequent,
    Signature,
    Term,
    Top,
    TOP,
    Var,
    fv,
    fv_term,
    freefor,
    occurs_const,
    signature,
    sub,
    well_formed,
    well_formed_sequent,
    well_formed_term,
)
from .syntax import (
    ParseError,
    SymbolTable,
    format_formula,
    format_sequent,
    format_term,
    parse_formula,
    parse_problem,
    parse_sequent,
    parse_signature,
    parse_term,
)
from .calculus import (
    CheckError,
    Derivation,
    ProofFormatError,
    all_commute,
    all_instantiate,
    all_intro_left,
    all_intro_right,
    and_intro,
    ax_and_left,
    ax_and_right,
    ax_refl,
    ax_top,
    ax_trans,
    check,
    conclusion,
    const_elim,
    cut,
    diam_over_all,
    dump_proof,
    dumps_proof,
    generalize_constant,
    instantiate_consequent,
    load_proof,
    nec,
    rename_bound,
    term_inst,
)
from .semantics import (
    AdequacyReport,
    Assignment,
    InadequateModelError,
    InternalError,
    Model,
    ModelFormatError,
    RawFrame,
    RawModel,
    assign_term,
    assignment,
    check_adequacy,
    cone_worlds,
    dump_model,
    dumps_model,
    eta_compose,
    load_model,
    replace_interp,
    restrict_replace,
    restrict_to_cone,
    sat,
    validate_model,
    xaltern,
    xaltern_support,
    xeq,
)
from .generate import GenBounds, generate_models, random_formula, random_signature
from .search import (
    Exhausted,
    Proved,
    Refuted,
    SearchBounds,
    SearchOutcome,
    decide,
    enumerate_countermodels,
    proof_search,
    soundness_check,
)

__version__ = "0.1.0"
