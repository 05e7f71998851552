"""Workbench for the simply typed λ-, λμ- and λμ^{→∧∨}-calculi."""

from .corpus import CorpusSpec, Item, enumerate_typed_terms, random_typed_term
from .lemmas import LemmaReport, verify
from .reduction import (
    BETA, BETAMU, BETAMU_RT, FULL, FULL_RT, RHO, RHO_THETA, Loop, Rule, RuleSet, SN, StepLabel,
    Trace, Unknown, eta, normalize, reach, reduction_graph, redexes, sn_verdict, step,
)
from .syntax import (
    Context, Mode, ParseError, parse_context, parse_equations, parse_term, parse_type,
    print_term, print_type,
)
from .terms import (
    App, Case, Const, Inj, Lam, Mu, Name, Pair, Proj, Sort, Var, alpha_eq, free_vars,
    mu_rename, size, struct_subst, subst,
)
from .translate import circle, circle_context, circle_typed, diamond, diamond_context, t_term
from .typecheck import Derivation, System, TypingError, check, infer
from .types import (
    And, Arrow, Atom, BOT, EquationSet, Or, Polarity, circle_equations, circle_type, congruent,
    is_good, neg, polarity_of,
)

__all__ = [
    "CorpusSpec", "Item", "enumerate_typed_terms", "random_typed_term", "LemmaReport",
    "verify", "BETA", "BETAMU", "BETAMU_RT", "FULL", "FULL_RT", "RHO", "RHO_THETA", "Loop",
    "Rule", "RuleSet", "SN", "StepLabel", "Trace", "Unknown", "eta", "normalize", "reach",
    "reduction_graph", "redexes", "sn_verdict", "step", "Context", "Mode", "ParseError",
    "parse_context", "parse_equations", "parse_term", "parse_type", "print_term", "print_type",
    "App", "Case", "Const", "Inj", "Lam", "Mu", "Name", "Pair", "Proj", "Sort", "Var",
    "alpha_eq", "free_vars", "mu_rename", "size", "struct_subst", "subst", "circle",
    "circle_context", "circle_typed", "diamond", "diamond_context", "t_term", "Derivation",
    "System", "TypingError", "check", "infer", "And", "Arrow", "Atom", "BOT", "EquationSet",
    "Or", "Polarity", "circle_equations", "circle_type", "congruent", "is_good", "neg",
    "polarity_of",
]
