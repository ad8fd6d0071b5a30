"""Proof search for alternation-trading time-space lower bounds.

Searches over normal-form proof annotations for the best exponent c such
that NTIME[n] not in DTS[n^c] is provable by alternation trading, by
compiling each annotation into a linear program and bisecting on c. Found
proofs are replayed through an exact rational rewrite engine and can be
verified independently of the search.
"""

from .annotation import (
    Annotation,
    InvalidAnnotation,
    count,
    describe_problem,
    enumerate_annotations,
    family_fvm,
    family_w,
    validate,
)
from .derivation import (
    DerivationError,
    Proof,
    Quantifier,
    QuantifierBlock,
    RuleApplication,
    RuleTag,
    SimpleClass,
    Violation,
    apply_slowdown,
    apply_speedup0,
    apply_speedup1,
    apply_speedup2,
    combine_adjacent,
    parse_pretty,
    plain_dts,
    pretty_print,
    proof_dumps,
    proof_loads,
    replay,
    replay_rules,
    verify_proof,
)
from .lp_model import (
    ExtractionError,
    LinearProgram,
    build_lp,
    build_lp_from_rules,
    export_lp_text,
    extract_proof,
    proof_point,
)
from .lp_solver import (
    LpSolution,
    SolverConfig,
    SolverError,
    check_point,
    solve,
)
from .search import (
    SearchError,
    SearchLedger,
    SearchResult,
    best_c,
    exhaustive,
    family_sweep,
    report,
    report_csv,
)

__version__ = "0.1.0"

__all__ = [
    "Annotation",
    "InvalidAnnotation",
    "count",
    "describe_problem",
    "enumerate_annotations",
    "family_fvm",
    "family_w",
    "validate",
    "DerivationError",
    "Proof",
    "Quantifier",
    "QuantifierBlock",
    "RuleApplication",
    "RuleTag",
    "SimpleClass",
    "Violation",
    "apply_slowdown",
    "apply_speedup0",
    "apply_speedup1",
    "apply_speedup2",
    "combine_adjacent",
    "parse_pretty",
    "plain_dts",
    "pretty_print",
    "proof_dumps",
    "proof_loads",
    "replay",
    "replay_rules",
    "verify_proof",
    "ExtractionError",
    "LinearProgram",
    "build_lp",
    "build_lp_from_rules",
    "export_lp_text",
    "extract_proof",
    "proof_point",
    "LpSolution",
    "SolverConfig",
    "SolverError",
    "check_point",
    "solve",
    "SearchError",
    "SearchLedger",
    "SearchResult",
    "best_c",
    "exhaustive",
    "family_sweep",
    "report",
    "report_csv",
    "__version__",
]
