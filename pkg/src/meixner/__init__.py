"""Meixner-type Jacobi fields on a finite weighted atom set.

Modules:
    core        lambda, alpha, beta, c, p and the maps psi / psi_inv
    poly1d      one-dimensional polynomials, Jacobi matrix, moments, Gauss rules
    measures    the laws mu_{lam,t}, char functions, Levy measures, samplers
    fock        extended Fock space, loop collections, ladder operators
    wick        Wick kernels, pairings, generating function, expectations
    functional  lowering / raising in the functional realization
    verify      verification suites used by the CLI and the tests
"""
from .core import MeixnerParams, Regime, make_params, psi, psi_inv, psi_inv_radius
from .errors import BudgetError, DomainError, MeixnerError
from .fock import DiscreteSpace, FockVector, LoopCollection, SymTensor

__all__ = [
    "MeixnerParams", "Regime", "make_params", "psi", "psi_inv", "psi_inv_radius",
    "MeixnerError", "DomainError", "BudgetError",
    "DiscreteSpace", "FockVector", "LoopCollection", "SymTensor",
]

__version__ = "0.1.0"
