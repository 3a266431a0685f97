"""Exact computations with graded Lie algebras of (symplectic) derivations
of free associative and free Lie algebras."""

__version__ = "0.1.0"
