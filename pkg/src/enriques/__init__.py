"""Explicit Enriques-cover constructions over finite fields."""

__version__ = "0.1.0"
