"""Exact-rational engine for full toroidal Lie algebras and their map versions.

Everything is computed over Q with `fractions.Fraction`; there is no floating
point anywhere in the package.
"""

__version__ = "0.1.0"
