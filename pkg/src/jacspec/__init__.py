"""Spectral analysis of perturbed oscillator Jacobi matrices.

Certified index-addressed eigenvalues, closed-form basis-change
matrices with independent cross-check routes, successive
diagonalization data, and asymptotic residual analysis, plus a batch
CLI (``jacspec``) with CSV/JSON output.
"""

from .model import ModelParams, Tridiagonal

__all__ = ["ModelParams", "Tridiagonal"]
__version__ = "0.1.0"
