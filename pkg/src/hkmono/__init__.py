"""Exact Lie-theoretic toolkit for monodromy of hyper-Kähler type cohomology."""

__version__ = "0.1.0"
