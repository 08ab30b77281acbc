"""Planar central configurations as fixed points of a self-map of shape space."""
from .model import (
    Configuration,
    PotentialKind,
    ProblemSpec,
    SearchReport,
    SolutionRecord,
    SpecError,
    validate_spec,
)
from .solver import collinear_enumerate, random_search, solve_from_start

__all__ = [
    "Configuration",
    "PotentialKind",
    "ProblemSpec",
    "SearchReport",
    "SolutionRecord",
    "SpecError",
    "collinear_enumerate",
    "random_search",
    "solve_from_start",
    "validate_spec",
]
__version__ = "0.1.0"
