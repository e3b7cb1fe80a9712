"""Tuple interpretations for many-sorted and higher-order term rewriting."""

from .algebra import (
    NAT,
    Functional,
    FunDom,
    Mono,
    NatDom,
    Order,
    ProbeSet,
    TupleDom,
    TupleSpec,
    add_cost,
    base_geq,
    base_gt,
    compare_at_type,
    compare_values,
    cost_of,
    make_probes,
    null_value,
    phi,
)
from .checker import (
    CheckConfig,
    CompatibilityReport,
    Counterexample,
    check_beta,
    check_eta,
    check_system,
    interpret_term,
    orient_rule,
    symbolic_certify,
    verify_decrease_along_reduction,
)
from .complexity import (
    BoundShape,
    RCClass,
    RCTable,
    bound_shape,
    classify_symbols,
    data_value_bound,
    empirical_rc,
    runtime_class,
)
from .interp import (
    Interpretation,
    analyze_monotonicity,
    check_strongly_monotonic,
    eval_expr,
    typecheck_expr,
)
from .problem import CORPUS, Problem, load_corpus, load_file, load_problem, parse_problem
from .rewriting import (
    AFS,
    FuelExhausted,
    Rule,
    derivation_height,
    enumerate_basic_terms,
    is_basic,
    is_data,
    normalize,
    successors,
    validate_rule,
)
from .terms import (
    Abs,
    App,
    Arrow,
    Base,
    FApp,
    FuncDecl,
    Signature,
    Var,
    alpha_eq,
    free_vars,
    substitute,
    term_size,
    type_of,
)
from .verdicts import Status, Verdict

__all__ = [
    "AFS",
    "Abs",
    "App",
    "Arrow",
    "Base",
    "BoundShape",
    "CORPUS",
    "CheckConfig",
    "CompatibilityReport",
    "Counterexample",
    "FApp",
    "FuelExhausted",
    "FunDom",
    "FuncDecl",
    "Functional",
    "Interpretation",
    "Mono",
    "NAT",
    "NatDom",
    "Order",
    "ProbeSet",
    "Problem",
    "RCClass",
    "RCTable",
    "Rule",
    "Signature",
    "Status",
    "TupleDom",
    "TupleSpec",
    "Var",
    "Verdict",
    "add_cost",
    "alpha_eq",
    "analyze_monotonicity",
    "base_geq",
    "base_gt",
    "bound_shape",
    "check_beta",
    "check_eta",
    "check_strongly_monotonic",
    "check_system",
    "classify_symbols",
    "compare_at_type",
    "compare_values",
    "cost_of",
    "data_value_bound",
    "derivation_height",
    "empirical_rc",
    "enumerate_basic_terms",
    "eval_expr",
    "free_vars",
    "interpret_term",
    "is_basic",
    "is_data",
    "load_corpus",
    "load_file",
    "load_problem",
    "make_probes",
    "normalize",
    "null_value",
    "orient_rule",
    "parse_problem",
    "phi",
    "runtime_class",
    "substitute",
    "successors",
    "symbolic_certify",
    "term_size",
    "type_of",
    "typecheck_expr",
    "validate_rule",
    "verify_decrease_along_reduction",
]
