"""Exact verification of X_ell exceptional orthogonal polynomials.

Submodules:

* :mod:`xell.ratpoly`    exact rational polynomials, Sturm root counting
* :mod:`xell.classical`  Laguerre and Jacobi polynomials
* :mod:`xell.systems`    radial oscillator and the two DPT systems, deformed
* :mod:`xell.identities` lemma, cubic and shape-invariance residuals
* :mod:`xell.numerics`   quadrature Gram matrices and finite-difference spectra
* :mod:`xell.checks`     named checks shared by the CLI and the tests
"""
from importlib.metadata import PackageNotFoundError, version

from .classical import jacobi, laguerre
from .ratpoly import Poly, Q, sturm_count_roots, symbol
from .systems import ConstraintError, Params, SystemKind, xell_poly, xi_poly

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # pragma: no cover
    __version__ = "0.0.0"

__all__ = [
    "Poly",
    "Q",
    "symbol",
    "sturm_count_roots",
    "laguerre",
    "jacobi",
    "SystemKind",
    "Params",
    "ConstraintError",
    "xi_poly",
    "xell_poly",
    "__version__",
]
