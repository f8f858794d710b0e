"""Exception types shared across the package."""


class SpecError(ValueError):
    """Invalid grid-number-one parameters (p, q, h)."""


class ScopeError(Exception):
    """Input is valid but lies outside what this package computes."""
