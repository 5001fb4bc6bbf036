"""Emptiness checking for parametric timed automata with non-resetting tests.

The package decides whether a timed automaton with at most two clocks and
at most one parameter accepts some infinite timed word, for every value of
the parameter, by sweeping a finite set of candidate values and running a
Buchi emptiness check on a finite abstraction for each. It also ships a
translation that removes test-and-reset clocks, a simulator for finite
timed words, generators for a family of clock-counting examples, and
randomized self-checks of the arithmetic facts the sweep relies on.
"""

from .core import (
    And,
    Atom,
    Automaton,
    Guard,
    Not,
    TRUE,
    Transition,
    TrueGuard,
    ValidationError,
    atoms,
    conj,
    eq,
    eval_constraint,
    ge,
    gt,
    guard_clocks,
    guard_constants,
    guard_params,
    is_nrtta,
    le,
    lt,
    map_atoms,
    max_constant,
    ne,
    parse_rational,
    transitions_from,
    validate,
)
from .semantics import (
    Configuration,
    TimedWord,
    Valuation,
    elapse,
    reachable_configs,
    reset_apply,
    run_frontiers,
    step,
    v_oplus,
    zero_valuation,
)
from .textio import (
    format_timed_word,
    guard_to_text,
    parse_automaton,
    parse_guard,
    parse_timed_word,
    print_automaton,
)
from .translate import product_state_origin, ta_to_nrtta
from .regions import (
    DEFAULT_REGION_BUDGET,
    Region,
    RegionAutomaton,
    SymbolicLasso,
    build_region_automaton,
    buchi_nonempty,
    concretize_lasso,
    extract_witness_word,
    find_lasso,
    immediate_successor,
    region_of,
    region_reset,
    region_sat,
    region_str,
    to_dot,
    zero_region,
)
from .zones import zone_nonempty
from .parametric import (
    Candidate,
    CandidateSet,
    Verdict,
    candidate_parameters,
    emptiness_fixed,
    instantiate,
    parametric_emptiness,
    prepare_fixed,
    scale_constants,
    witness_word,
)
from .analysis import (
    IntervalClass,
    OneResetSeq,
    PolarityContext,
    SuiteResult,
    agreement_transport,
    classify_critical_sequence,
    compress_region_lasso,
    critval_cases,
    fracvalue_case,
    in_agreement,
    in_complete_agreement,
    interval_bounds,
    interval_class,
    is_critical,
    low_k,
    polarity_ctx,
    pr2_shape,
    run_suites,
)
from .examples import gen_lk, gen_lpk
from .errors import (
    ChiTooLarge,
    DegenerateParameter,
    Disconnected,
    FloorMismatch,
    GuardViolated,
    Infeasible,
    MalformedWord,
    NonIntegerAfterScaling,
    NonPositiveDelay,
    NotCompleteAgreement,
    NotInSZ,
    NotOneParameter,
    ParseError,
    PntaError,
    PolarityMismatch,
    PreconditionViolated,
    RegionBudgetExceeded,
    UnboundSymbol,
    UnsupportedAutomaton,
    WrongSource,
)

__version__ = "0.1.0"

__all__ = [
    "And", "Atom", "Automaton", "Guard", "Not", "TRUE", "Transition",
    "TrueGuard", "ValidationError", "atoms", "conj", "eq", "eval_constraint",
    "ge", "gt", "guard_clocks", "guard_constants", "guard_params", "is_nrtta",
    "le", "lt", "map_atoms", "max_constant", "ne", "parse_rational",
    "transitions_from", "validate",
    "Configuration", "TimedWord", "Valuation", "elapse", "reachable_configs",
    "reset_apply", "run_frontiers", "step", "v_oplus", "zero_valuation",
    "format_timed_word", "guard_to_text", "parse_automaton", "parse_guard",
    "parse_timed_word", "print_automaton",
    "product_state_origin", "ta_to_nrtta",
    "DEFAULT_REGION_BUDGET", "Region", "RegionAutomaton", "SymbolicLasso",
    "build_region_automaton", "buchi_nonempty", "concretize_lasso",
    "extract_witness_word", "find_lasso", "immediate_successor", "region_of",
    "region_reset", "region_sat", "region_str", "to_dot", "zero_region",
    "zone_nonempty",
    "Candidate", "CandidateSet", "Verdict", "candidate_parameters",
    "emptiness_fixed", "instantiate", "parametric_emptiness", "prepare_fixed",
    "scale_constants", "witness_word",
    "IntervalClass", "OneResetSeq", "PolarityContext", "SuiteResult",
    "agreement_transport", "classify_critical_sequence",
    "compress_region_lasso", "critval_cases", "fracvalue_case",
    "in_agreement", "in_complete_agreement", "interval_bounds",
    "interval_class", "is_critical", "low_k", "polarity_ctx", "pr2_shape",
    "run_suites",
    "gen_lk", "gen_lpk",
    "ChiTooLarge", "DegenerateParameter", "Disconnected", "FloorMismatch",
    "GuardViolated", "Infeasible", "MalformedWord", "NonIntegerAfterScaling",
    "NonPositiveDelay", "NotCompleteAgreement", "NotInSZ", "NotOneParameter",
    "ParseError", "PntaError", "PolarityMismatch", "PreconditionViolated",
    "RegionBudgetExceeded", "UnboundSymbol", "UnsupportedAutomaton",
    "WrongSource",
    "__version__",
]
