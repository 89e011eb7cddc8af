"""Numerical checks of the universal entropy bound S <= 2 pi E R (hbar = c = 1)."""
from .core import (
    BoundModelError,
    BoundReport,
    ConfinementError,
    DomainError,
    NoZeroError,
    PropagationError,
    evaluate_bound,
)

__version__ = "0.1.0"
