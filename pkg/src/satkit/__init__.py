"""satkit: compile logic to CNF, solve it with CDCL, learn the branching."""

from .cnf import (
    FALSE,
    TRUE,
    UNDEF,
    Assignment,
    Clause,
    CnfFormula,
    Literal,
    evaluate_clause,
    evaluate_formula,
)
from .dimacs import parse_dimacs, write_dimacs

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "Clause",
    "CnfFormula",
    "FALSE",
    "Literal",
    "TRUE",
    "UNDEF",
    "evaluate_clause",
    "evaluate_formula",
    "parse_dimacs",
    "write_dimacs",
    "__version__",
]
