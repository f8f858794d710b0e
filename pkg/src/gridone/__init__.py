"""Chekanov-type DGA combinatorics for grid-number-one Legendrian knots in lens spaces."""

from .exceptions import ScopeError, SpecError
from .lens_arith import GridOneSpec, LensParams

__all__ = ["GridOneSpec", "LensParams", "ScopeError", "SpecError"]
__version__ = "0.1.0"
