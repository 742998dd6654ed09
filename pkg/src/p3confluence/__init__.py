"""Rational Painleve-III solutions, their D8 confluence limit and the Bessel-kernel determinant."""

__version__ = "0.1.0"
