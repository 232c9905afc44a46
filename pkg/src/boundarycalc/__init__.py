"""Euclidean geometric algebra with a numerical boundary-theorem verifier.

The package is organized bottom-up:

``algebra``
    Dense multivectors over the Euclidean algebras G_1 .. G_6 and the
    full product zoo (geometric, outer, inner, commutator), plus grade
    bookkeeping, reversion, duality and blade projection.
``fields``
    Polynomial multivector fields and the named field registry.
``derivative``
    Finite-difference vector and tangential derivatives, the classical
    grad/div/curl/laplacian wrappers, and a shrinking-boundary
    derivative estimator.
``manifolds`` / ``quadrature``
    Parametrized cells with directed (multivector-valued) measures and
    Gauss-Legendre integration of pairings against fields.
``cases``
    The catalogue of boundary-theorem verification cases, each computing
    a volume-side and a boundary-side integral by independent routes.
``exprparse``
    A small text grammar for polynomial multivector fields.
``render`` / ``report`` / ``cli``
    Deterministic SVG field scenes, report serialization, and the
    command-line front end.
"""

from .algebra import Algebra, Multivector, blade_product
from .cases import builtin_cases, run_case
from .fields import get_field
from .manifolds import boundary_of, get_manifold
from .quadrature import QuadratureRule, integrate_directed

__all__ = [
    "Algebra",
    "Multivector",
    "QuadratureRule",
    "blade_product",
    "boundary_of",
    "builtin_cases",
    "get_field",
    "get_manifold",
    "integrate_directed",
    "run_case",
]

__version__ = "0.1.0"
