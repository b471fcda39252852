"""Numerical workbench for spinor field equations on Riemannian spin manifolds."""

__version__ = "0.1.0"
