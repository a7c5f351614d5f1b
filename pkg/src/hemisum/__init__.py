"""Certified verification that four points on a closed hemisphere have pairwise distance sum at most 4+4*sqrt(2)."""
from .exact import OPTIMUM, Q2
from .local import verify_local
from .search import SearchConfig, run_global

__all__ = ["OPTIMUM", "Q2", "SearchConfig", "run_global", "verify_local"]
