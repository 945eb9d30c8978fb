"""Numerical toolkit for complete Pick kernels on finite point sets."""

__version__ = "0.1.0"
