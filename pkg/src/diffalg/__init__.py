"""Exact computations with matrix differential-operator Lie algebras and their representations."""

__version__ = "0.1.0"
