"""Numerics for Rudin-Shapiro spherical harmonics on S^3.

Submodules: ``rudin_shapiro``, ``hopf``, ``harmonics``, ``semiclassical``,
``quadrature`` (independent oracle), ``suites`` and ``cli``.
"""

__version__ = "0.1.0"

from .harmonics import HarmonicSpec, evaluate, sup_norm
from .hopf import CliffordTorus, CotangentVector, HopfPoint
from .rudin_shapiro import RSSequence, autocorrelation, generate
from .semiclassical import (
    MatrixElementReport,
    MonomialSymbol,
    SymbolPolynomial,
    clifford_limit,
    matrix_element,
    matrix_element_poly,
)

__all__ = [
    "CliffordTorus",
    "CotangentVector",
    "HarmonicSpec",
    "HopfPoint",
    "MatrixElementReport",
    "MonomialSymbol",
    "RSSequence",
    "SymbolPolynomial",
    "autocorrelation",
    "clifford_limit",
    "evaluate",
    "generate",
    "matrix_element",
    "matrix_element_poly",
    "sup_norm",
]
