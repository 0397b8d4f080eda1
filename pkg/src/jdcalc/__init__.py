"""Integral Jacobi diagram modules, the delta operations and exact verification suites."""

__version__ = "0.1.0"
