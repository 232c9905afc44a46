"""Finite-difference vector and tangential derivatives of multivector fields.

The vector derivative is the operator ``sum_i e_i d/dx_i`` acting
through the geometric product; its grade-lowering part is the
generalized divergence, its grade-raising part the generalized curl.
The tangential derivative of a manifold with unit tangent blade ``I_m``
first contracts the operator, ``I_m . nabla = sum_i (I_m . e_i) d/dx_i``,
and then multiplies the result by ``I_m^{-1}`` from the left — the
parse that keeps normal-valued components (and hence the 4D quadvector
case) alive.

All derivatives use central differences; first-order stencils default
to ``h = 1e-5 * max(1, |x|)``, second-order stencils (Laplacian, nested
identities) to a coarser ``h2 = 1e-3`` step that keeps roundoff noise
under the 1e-6 verification tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import Algebra, Multivector, batch_product
from .fields import FieldEvaluator
from .manifolds import ball3, boundary_of, disk, segment
from .quadrature import QuadratureRule, integrate_directed


@dataclass(frozen=True)
class DerivativeScheme:
    """Central-difference configuration.

    ``h`` is the relative first-derivative step, ``h2`` the step for
    second-difference stencils; both are scaled by ``max(1, |x|)``.
    """

    h: float = 1e-5
    h2: float = 1e-3

    def __post_init__(self):
        if self.h <= 0 or self.h2 <= 0:
            raise ValueError("finite-difference steps must be positive")

    def steps(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return self.h * np.maximum(1.0, np.linalg.norm(points, axis=1))


DEFAULT_SCHEME = DerivativeScheme()


def _partials_batch(field: FieldEvaluator, points: np.ndarray,
                    scheme: DerivativeScheme) -> list[np.ndarray]:
    """Central-difference coefficient stacks dF/dx_i, one per coordinate."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    h = scheme.steps(points)
    out = []
    for i in range(field.algebra.dim):
        shift = np.zeros(field.algebra.dim)
        shift[i] = 1.0
        plus = field.evaluate_batch(points + h[:, None] * shift)
        minus = field.evaluate_batch(points - h[:, None] * shift)
        out.append((plus - minus) / (2.0 * h)[:, None])
    return out


def vector_derivative_batch(field: FieldEvaluator, points: np.ndarray,
                            scheme: DerivativeScheme = DEFAULT_SCHEME) -> np.ndarray:
    """Coefficient stack of ``nabla F`` at each point (shape ``(N, 2**n)``)."""
    alg = field.algebra
    partials = _partials_batch(field, points, scheme)
    total = np.zeros_like(partials[0])
    for i, dcoeffs in enumerate(partials):
        total += batch_product(alg, alg.basis_vector(i + 1).coeffs, dcoeffs)
    return total


def vector_derivative(field: FieldEvaluator, x: np.ndarray,
                      scheme: DerivativeScheme = DEFAULT_SCHEME) -> Multivector:
    """``nabla F`` at one point: sum_i e_i (dF/dx_i) by central differences."""
    coeffs = vector_derivative_batch(field, np.asarray(x, dtype=float)[None, :], scheme)
    return Multivector(field.algebra, coeffs[0])


def derivative_split(field: FieldEvaluator, x: np.ndarray,
                     scheme: DerivativeScheme = DEFAULT_SCHEME
                     ) -> tuple[Multivector, Multivector]:
    """(generalized divergence, generalized curl) of a homogeneous field.

    For a grade-k field these are the grade-(k-1) and grade-(k+1) parts
    of the vector derivative; they reassemble it exactly.
    """
    k = _homogeneous_grade(field)
    alg = field.algebra
    full = vector_derivative(field, x, scheme)
    div = full.grade(k - 1) if k >= 1 else alg.zero()
    curl = full.grade(k + 1) if k + 1 <= alg.dim else alg.zero()
    return div, curl


def _homogeneous_grade(field: FieldEvaluator) -> int:
    if len(field.codomain_grades) != 1:
        raise ValueError(
            f"field {field.name!r} is not homogeneous: grades "
            f"{sorted(field.codomain_grades)}")
    return next(iter(field.codomain_grades))


def tangential_derivative_batch(field: FieldEvaluator, points: np.ndarray,
                                tangent: Multivector,
                                scheme: DerivativeScheme = DEFAULT_SCHEME) -> np.ndarray:
    alg = field.algebra
    inv = tangent.inverse()
    partials = _partials_batch(field, points, scheme)
    contracted = np.zeros_like(partials[0])
    for i, dcoeffs in enumerate(partials):
        coeff = tangent | alg.basis_vector(i + 1)
        if np.any(coeff.coeffs != 0.0):
            contracted += batch_product(alg, coeff.coeffs, dcoeffs)
    return batch_product(alg, inv.coeffs, contracted)


def tangential_derivative(field: FieldEvaluator, x: np.ndarray, tangent: Multivector,
                          scheme: DerivativeScheme = DEFAULT_SCHEME) -> Multivector:
    """Intrinsic derivative ``I_m^{-1} ((I_m . nabla) F)`` at one point.

    ``tangent`` is the manifold's (invertible) unit tangent blade; with
    ``m = n`` this reduces to the full vector derivative.
    """
    coeffs = tangential_derivative_batch(
        field, np.asarray(x, dtype=float)[None, :], tangent, scheme)
    return Multivector(field.algebra, coeffs[0])


def boundary_derivative_estimate(field: FieldEvaluator, x: np.ndarray, radius: float,
                                 rule: QuadratureRule | None = None) -> Multivector:
    """Coordinate-free derivative: ``(I_m^{-1}/|cell|) boundary-integral of
    ``dx^{m-1} F`` over a small ball around ``x``.

    Supported for full-dimensional cells in G_1 .. G_3 (interval, disk,
    ball).  Converges to the derivative with O(radius^2) error.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    rule = rule or QuadratureRule(12)
    alg = field.algebra
    x = np.asarray(x, dtype=float)
    if alg.dim == 1:
        cell = segment(float(x[0]) - radius, float(x[0]) + radius)
        volume = 2.0 * radius
    elif alg.dim == 2:
        cell = disk(radius, x)
        volume = math.pi * radius**2
    elif alg.dim == 3:
        cell = ball3(radius, x)
        volume = 4.0 / 3.0 * math.pi * radius**3
    else:
        raise ValueError(
            f"boundary derivative estimate supports dimensions 1..3, got {alg.dim}")
    loop = integrate_directed(boundary_of(cell), "geometric", field, rule)
    return alg.pseudoscalar_inverse() * loop / volume


# ---------------------------------------------------------------------------
# Classical wrappers (scalar potentials and R^3/R^2 vector fields)
# ---------------------------------------------------------------------------

def gradient(field: FieldEvaluator, x: np.ndarray,
             scheme: DerivativeScheme = DEFAULT_SCHEME) -> Multivector:
    """Gradient vector of a scalar field."""
    if field.codomain_grades != {0}:
        raise ValueError(f"gradient needs a scalar field, got {field.name!r}")
    return vector_derivative(field, x, scheme)


def divergence(field: FieldEvaluator, x: np.ndarray,
               scheme: DerivativeScheme = DEFAULT_SCHEME) -> float:
    """Classical divergence (scalar) of a vector field."""
    if field.codomain_grades != {1}:
        raise ValueError(f"divergence needs a vector field, got {field.name!r}")
    return vector_derivative(field, x, scheme).scalar_part()


def curl(field: FieldEvaluator, x: np.ndarray,
         scheme: DerivativeScheme = DEFAULT_SCHEME) -> Multivector:
    """Classical curl vector of an R^3 vector field.

    Computed from the component stencil (d2 F3 - d3 F2, ...) — not by
    dualizing the outer part — so the identity ``nabla ^ F = I3 (curl F)``
    stays a two-route check.
    """
    alg = field.algebra
    if alg.dim != 3 or field.codomain_grades != {1}:
        raise ValueError(f"curl needs an R^3 vector field, got {field.name!r}")
    x = np.asarray(x, dtype=float)
    parts = [p[0] for p in _partials_batch(field, x[None, :], scheme)]
    e = [1 << i for i in range(3)]
    return alg.vector([
        parts[1][e[2]] - parts[2][e[1]],
        parts[2][e[0]] - parts[0][e[2]],
        parts[0][e[1]] - parts[1][e[0]],
    ])


def laplacian(field: FieldEvaluator, x: np.ndarray,
              scheme: DerivativeScheme = DEFAULT_SCHEME) -> float:
    """Laplacian of a scalar field by direct second differences.

    Independent of the divergence-of-gradient route, so the identity
    ``div grad phi = laplacian phi`` is a genuine cross-check.
    """
    if field.codomain_grades != {0}:
        raise ValueError(f"laplacian needs a scalar field, got {field.name!r}")
    x = np.asarray(x, dtype=float)
    h = scheme.h2 * max(1.0, float(np.linalg.norm(x)))
    center = field(x).scalar_part()
    total = 0.0
    for i in range(field.algebra.dim):
        shift = np.zeros(field.algebra.dim)
        shift[i] = h
        total += (field(x + shift).scalar_part() - 2.0 * center
                  + field(x - shift).scalar_part()) / h**2
    return total


# ---------------------------------------------------------------------------
# Derived fields (derivatives packaged back up as fields)
# ---------------------------------------------------------------------------

class DerivativePartField(FieldEvaluator):
    """A field evaluating a grade part of another field's derivative.

    ``part`` selects the generalized divergence (grade k-1), curl
    (grade k+1) or the full derivative; ``tangent`` switches from the
    vector derivative to the tangential derivative of a flat manifold.
    This is the volume-side integrand of the boundary-theorem cases.
    """

    def __init__(self, base: FieldEvaluator, part: str = "full",
                 tangent: Multivector | None = None,
                 scheme: DerivativeScheme = DEFAULT_SCHEME):
        if part not in ("full", "div", "curl"):
            raise ValueError(f"unknown derivative part {part!r}")
        alg = base.algebra
        if part == "full":
            grades = set(range(alg.dim + 1))
        else:
            k = _homogeneous_grade(base)
            grades = {k - 1} if part == "div" else {k + 1}
            if not all(0 <= g <= alg.dim for g in grades):
                raise ValueError(f"derivative part {part!r} of grade {k} "
                                 f"leaves G_{alg.dim}")
        self.base = base
        self.part = part
        self.tangent = tangent
        self.scheme = scheme
        name = {"full": "nabla", "div": "div", "curl": "curl"}[part]
        super().__init__(f"{name}({base.name})", alg, self._eval_point, grades,
                         domain_dim=base.domain_dim)

    def _eval_point(self, x: np.ndarray) -> Multivector:
        return Multivector(self.algebra, self.evaluate_batch(x[None, :])[0])

    def evaluate_batch(self, points: np.ndarray) -> np.ndarray:
        if self.tangent is None:
            full = vector_derivative_batch(self.base, points, self.scheme)
        else:
            full = tangential_derivative_batch(self.base, points, self.tangent,
                                               self.scheme)
        if self.part == "full":
            return full
        (k,) = self.codomain_grades
        keep = self.algebra.grades == k
        return np.where(keep[None, :], full, 0.0)


def fd_gradient_field(field: FieldEvaluator,
                      scheme: DerivativeScheme = DEFAULT_SCHEME) -> FieldEvaluator:
    """The gradient of a scalar field, packaged as a vector field."""
    if field.codomain_grades != {0}:
        raise ValueError(f"gradient field needs a scalar field, got {field.name!r}")
    grad = DerivativePartField(field, "curl", scheme=scheme)
    grad.name = f"grad({field.name})"
    return grad


def fd_curl_field(field: FieldEvaluator,
                  scheme: DerivativeScheme = DEFAULT_SCHEME) -> FieldEvaluator:
    """The classical curl of an R^3 vector field, as a new vector field."""
    alg = field.algebra

    def evaluate(x: np.ndarray) -> Multivector:
        return curl(field, x, scheme)

    return FieldEvaluator(f"curl({field.name})", alg, evaluate, {1},
                          domain_dim=field.domain_dim)
