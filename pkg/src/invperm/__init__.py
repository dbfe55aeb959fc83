"""Inversion minimization on trees: exact solvers, sensitivity analysis and the cross-inversion distribution."""

from .core_model import (
    Ordering,
    Ranking,
    Transposition,
    Tree,
    apply_transposition,
    induced_ranking,
    normalize,
    parse_ranking,
    parse_tree,
    serialize_ranking,
    serialize_tree,
)
from .counting import count_inversions, cross_inv_tables, dinv, inv, mann_whitney_u, wilcoxon_w, xinv, xinv_via_wilcoxon
from .errors import InvPermError, LimitExceeded, ValidationError
from .minimizer import minv, minv_bruteforce, solve

__version__ = "0.1.0"

__all__ = [
    "Ordering", "Ranking", "Transposition", "Tree", "apply_transposition", "induced_ranking", "normalize",
    "parse_ranking", "parse_tree", "serialize_ranking", "serialize_tree",
    "count_inversions", "cross_inv_tables", "dinv", "inv", "mann_whitney_u", "wilcoxon_w", "xinv",
    "xinv_via_wilcoxon", "InvPermError", "LimitExceeded", "ValidationError", "minv", "minv_bruteforce", "solve",
]
