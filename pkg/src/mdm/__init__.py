"""Proof-checking kernel and semantics laboratory for minimal deduction modulo."""

__version__ = "0.1.0"
