"""Polynomial-basis Kolmogorov-Arnold network toolkit."""

from .families import FamilySpec, FAMILY_NAMES, family_spec

__all__ = ["FamilySpec", "FAMILY_NAMES", "family_spec"]

__version__ = "0.1.0"
