"""Model checking for counting MSO with annotated-treewidth set quantifiers and disjoint-paths predicates.

Brute-force semantics, exact treewidth and annotated treewidth, annotated
types, railed-annulus utilities and an irrelevant-vertex reduction driver,
all sized for small graphs.
"""

from .errors import CapExceeded, ContractViolation, FormulaError
from .logic import parse, render, to_prenex
from .semantics import check_dp, check_dp_plus, evaluate, evaluate_query
from .structures import Structure, generate, graph
from .width import annotated_treewidth, treewidth, treewidth_exact

__all__ = [
    "CapExceeded",
    "ContractViolation",
    "FormulaError",
    "Structure",
    "annotated_treewidth",
    "check_dp",
    "check_dp_plus",
    "evaluate",
    "evaluate_query",
    "generate",
    "graph",
    "parse",
    "render",
    "to_prenex",
    "treewidth",
    "treewidth_exact",
]
