"""Generalized Umemura polynomials over exact rationals.

Submodules: ``ring`` (sparse polynomials), ``combinatorics`` (index sets
and subset weights), ``families`` (polynomial constructions),
``identities`` (identity checks), ``painleve`` (high-precision residuals),
``errata`` (misprint ledger) and ``cli``.
"""

__version__ = "0.1.0"
