"""Finite relation algebras, proper relations and representations of reducts."""

from .algebra import (
    AlgebraError,
    AtomStructure,
    Element,
    build_algebra,
    check_ra_axioms,
)
from .refuter import refute_finite_candidate
from .relations import Relation
from .representation import CandidateMap, check_representation, theta_construction
from .search import SearchConfig, Verdict, frp_scan, search_representation
from .terms import Signature, eval_abstract, eval_proper, parse_term
from .zoo import ZOO, cyclic_algebra, point_algebra

__all__ = [
    "AlgebraError",
    "AtomStructure",
    "CandidateMap",
    "Element",
    "Relation",
    "SearchConfig",
    "Signature",
    "Verdict",
    "ZOO",
    "build_algebra",
    "check_ra_axioms",
    "check_representation",
    "cyclic_algebra",
    "eval_abstract",
    "eval_proper",
    "frp_scan",
    "parse_term",
    "point_algebra",
    "refute_finite_candidate",
    "search_representation",
    "theta_construction",
]
