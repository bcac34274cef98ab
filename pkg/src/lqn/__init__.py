"""Representations of the relation algebras L(q, n) and their probabilistic thresholds."""

__version__ = "0.1.0"
