"""Exact stable representation theory and degree-zero Waldhausen K-theory for
finite-dimensional algebras over prime fields."""

__version__ = "0.1.0"
