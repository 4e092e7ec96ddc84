"""Exact torsion-level models for stability of symmetric powers of rank-2 bundles on curves."""
from .errors import BudgetExceeded, SymstabError, ValidationError
from .torsion import RatMod1, TorsionVector, budget, enumerate_torsion, order, torsion_count

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "RatMod1",
    "SymstabError",
    "TorsionVector",
    "ValidationError",
    "budget",
    "enumerate_torsion",
    "order",
    "torsion_count",
]
