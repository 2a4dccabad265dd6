"""Exact computation, canonicalization and classification of Saletan contractions."""

__version__ = "0.1.0"
