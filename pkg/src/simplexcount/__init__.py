"""Exact covering LPs, exponent recursion, extremal constructions and cuttings for unit and congruent simplex counts."""

__version__ = "0.1.0"
