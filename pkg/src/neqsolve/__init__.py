"""Equality/disequality constraint solving over omega-categorical abelian
groups and the countable atomless semilattice, with a classifier separating
the polynomial-time structures from the NP-hard ones."""

__version__ = "0.1.0"

from .backend import BACKEND
from .terms import (
    GROUP,
    SEMILATTICE,
    SIG_GROUP,
    SIG_SEMILATTICE,
    AbelianInstance,
    Eq,
    FlatInstance,
    Instance,
    Meet,
    Neg,
    Neq,
    ParseError,
    Signature,
    Sum,
    Var,
    Zero,
    flatten,
    format_instance,
    format_term,
    linearize_group,
    parse_instance,
    parse_term_text,
    term_variables,
)
from .groups import (
    OMEGA,
    TRIVIAL,
    GroupDescriptor,
    NPHard,
    Tractable,
    biembed_normal_form,
    biembeddable,
    classify,
    format_descriptor,
    parse_descriptor,
    quotient_by_involution,
)
from .verdict import (
    BUDGET,
    SAT,
    UNSAT,
    GroupWitness,
    SemilatticeWitness,
    Verdict,
)
from .modlinalg import AffineSystem, ModMatrix, RowBasis, entails_equal, howell, solve
from .abelian import (
    BudgetExhausted,
    check_entailment,
    check_identity,
    solve_general,
    solve_instance,
    solve_over_descriptor,
    solve_tractable,
)
from .semilattice import (
    FiniteSemilattice,
    HornProblem,
    check_entailment_semilattice,
    check_identity_semilattice,
    embed_into_subsets,
    horn_solve,
    parse_semilattice,
    solve_U,
    solve_finite,
)
from .pseudosiggers import (
    TruncElement,
    eval_alpha,
    eval_f,
    pair_index,
    verify_pseudo_siggers,
)

__all__ = [
    "BACKEND",
    "GROUP",
    "SEMILATTICE",
    "SIG_GROUP",
    "SIG_SEMILATTICE",
    "AbelianInstance",
    "Eq",
    "FlatInstance",
    "Instance",
    "Meet",
    "Neg",
    "Neq",
    "ParseError",
    "Signature",
    "Sum",
    "Var",
    "Zero",
    "flatten",
    "format_instance",
    "format_term",
    "linearize_group",
    "parse_instance",
    "parse_term_text",
    "term_variables",
    "OMEGA",
    "TRIVIAL",
    "GroupDescriptor",
    "NPHard",
    "Tractable",
    "biembed_normal_form",
    "biembeddable",
    "classify",
    "format_descriptor",
    "parse_descriptor",
    "quotient_by_involution",
    "BUDGET",
    "SAT",
    "UNSAT",
    "GroupWitness",
    "SemilatticeWitness",
    "Verdict",
    "AffineSystem",
    "ModMatrix",
    "RowBasis",
    "entails_equal",
    "howell",
    "solve",
    "BudgetExhausted",
    "check_entailment",
    "check_identity",
    "solve_general",
    "solve_instance",
    "solve_over_descriptor",
    "solve_tractable",
    "FiniteSemilattice",
    "HornProblem",
    "check_entailment_semilattice",
    "check_identity_semilattice",
    "embed_into_subsets",
    "horn_solve",
    "parse_semilattice",
    "solve_U",
    "solve_finite",
    "TruncElement",
    "eval_alpha",
    "eval_f",
    "pair_index",
    "verify_pseudo_siggers",
    "__version__",
]
