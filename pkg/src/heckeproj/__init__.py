"""Orthogonal projections satisfying the Hecke relations: checks, catalogue, search."""
from .catalog import CatalogEntry, standard_solutions
from .frame import Frame, coupling_analysis, to_projection
from .hecke import SolutionReport, classify, estimate_Q, functional_F
from .projection import Projection, random_projection, validate
from .search import SearchConfig, SearchResult, minimize

__version__ = "0.1.0"

__all__ = [
    "CatalogEntry",
    "Frame",
    "Projection",
    "SearchConfig",
    "SearchResult",
    "SolutionReport",
    "classify",
    "coupling_analysis",
    "estimate_Q",
    "functional_F",
    "minimize",
    "random_projection",
    "standard_solutions",
    "to_projection",
    "validate",
]
