"""Exact constructions and certificates for arithmetic lattices in classical groups."""

__version__ = "0.1.0"
