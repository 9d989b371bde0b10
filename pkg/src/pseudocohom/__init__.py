"""Exact computations with Lie pseudoalgebras over cocommutative Hopf algebras."""

__version__ = "0.1.0"
