"""Combinatorics of sandwiched surface singularities and their fillings:
plumbing-graph blow-down, braided wiring diagrams, vanishing-cycle
factorizations, and incidence-matrix invariants."""

__version__ = "0.1.0"
