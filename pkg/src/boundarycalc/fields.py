"""Multivector fields: polynomial machinery and the named field registry.

A :class:`FieldEvaluator` is a pure map from points of R^domain_dim to
multivectors with declared codomain grades.  Most shipped fields are
:class:`PolyField` instances — one real polynomial per basis blade —
which gives three things for free: exact analytic derivatives to test
the finite-difference machinery against, vectorized evaluation over
quadrature node batches, and compilation targets for the expression
grammar.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Iterable, Mapping

import numpy as np

from .algebra import Algebra, Multivector

Monomial = tuple[int, ...]


class Polynomial:
    """Real polynomial in ``nvars`` variables, stored as monomial -> coeff.

    Monomial keys are exponent tuples of length ``nvars``.  Evaluation
    accepts a single point of shape ``(nvars,)`` or a batch of shape
    ``(N, nvars)``.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, float] | None = None):
        self.nvars = nvars
        clean: dict[Monomial, float] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ValueError(f"bad monomial {exps} for {nvars} variables")
            if coeff != 0.0:
                clean[exps] = clean.get(exps, 0.0) + float(coeff)
        self.terms = {k: v for k, v in clean.items() if v != 0.0}

    @classmethod
    def constant(cls, nvars: int, value: float) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Polynomial":
        """The coordinate polynomial x_i (1-based index)."""
        exps = [0] * nvars
        exps[i - 1] = 1
        return cls(nvars, {tuple(exps): 1.0})

    def __call__(self, x: np.ndarray) -> float | np.ndarray:
        x = np.asarray(x, dtype=float)
        batch = x.ndim == 2
        total: float | np.ndarray = np.zeros(len(x)) if batch else 0.0
        for exps, coeff in self.terms.items():
            term = coeff
            for v, e in enumerate(exps):
                if e:
                    term = term * (x[:, v] if batch else x[v]) ** e
            total = total + term
        return total

    def diff(self, i: int) -> "Polynomial":
        """Partial derivative with respect to x_i (1-based)."""
        out: dict[Monomial, float] = {}
        for exps, coeff in self.terms.items():
            e = exps[i - 1]
            if e:
                key = exps[: i - 1] + (e - 1,) + exps[i:]
                out[key] = out.get(key, 0.0) + coeff * e
        return Polynomial(self.nvars, out)

    def degree(self) -> int:
        return max((sum(exps) for exps in self.terms), default=0)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if self.nvars != other.nvars:
            raise ValueError("variable-count mismatch")
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0.0) + v
        return Polynomial(self.nvars, out)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Polynomial(self.nvars, {k: v * other for k, v in self.terms.items()})
        if isinstance(other, Polynomial):
            if self.nvars != other.nvars:
                raise ValueError("variable-count mismatch")
            out: dict[Monomial, float] = {}
            for ea, ca in self.terms.items():
                for eb, cb in other.terms.items():
                    key = tuple(a + b for a, b in zip(ea, eb))
                    out[key] = out.get(key, 0.0) + ca * cb
            return Polynomial(self.nvars, out)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (isinstance(other, Polynomial) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __repr__(self) -> str:
        return f"Polynomial({self.nvars}, {self.terms!r})"


class FieldEvaluator:
    """A named, pure map from points in R^domain_dim to multivectors."""

    def __init__(self, name: str, algebra: Algebra, func: Callable[[np.ndarray], Multivector],
                 codomain_grades: Iterable[int], domain_dim: int | None = None):
        self.name = name
        self.algebra = algebra
        self.domain_dim = algebra.dim if domain_dim is None else domain_dim
        self._func = func
        self.codomain_grades = frozenset(int(g) for g in codomain_grades)

    def __call__(self, x: np.ndarray) -> Multivector:
        value = self._func(np.asarray(x, dtype=float))
        if not np.all(np.isfinite(value.coeffs)):
            raise ValueError(f"field {self.name!r} is non-finite at {x}")
        return value

    def evaluate_batch(self, points: np.ndarray) -> np.ndarray:
        """Coefficient stack of shape ``(N, 2**dim)`` for points ``(N, dim)``."""
        points = np.asarray(points, dtype=float)
        out = np.empty((len(points), self.algebra.size))
        for r, x in enumerate(points):
            out[r] = self(x).coeffs
        return out

    def __repr__(self) -> str:
        grades = sorted(self.codomain_grades)
        return f"<field {self.name!r} on R^{self.domain_dim}, grades {grades}>"


class PolyField(FieldEvaluator):
    """Field with one :class:`Polynomial` per basis blade (exact calculus)."""

    def __init__(self, name: str, algebra: Algebra, blade_polys: Mapping[int, Polynomial]):
        self.blade_polys = {
            int(mask): poly for mask, poly in blade_polys.items() if poly.terms
        }
        for mask, poly in self.blade_polys.items():
            if not 0 <= mask < algebra.size:
                raise ValueError(f"blade mask {mask:#b} outside G_{algebra.dim}")
            if poly.nvars != algebra.dim:
                raise ValueError("polynomial variable count must match the algebra")
        grades = {int(algebra.grades[m]) for m in self.blade_polys}
        super().__init__(name, algebra, self._eval_point, grades or {0})

    def _eval_point(self, x: np.ndarray) -> Multivector:
        coeffs = np.zeros(self.algebra.size)
        for mask, poly in self.blade_polys.items():
            coeffs[mask] = poly(x)
        return Multivector(self.algebra, coeffs)

    def evaluate_batch(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        out = np.zeros((len(points), self.algebra.size))
        for mask, poly in self.blade_polys.items():
            out[:, mask] = poly(points)
        return out

    def partial(self, i: int) -> "PolyField":
        """Exact partial derivative field with respect to x_i (1-based)."""
        return PolyField(
            f"d{self.name}_dx{i}", self.algebra,
            {m: p.diff(i) for m, p in self.blade_polys.items()})

    def analytic_vector_derivative(self, x: np.ndarray) -> Multivector:
        """Exact value of the vector derivative sum_i e_i (dF/dx_i)."""
        total = self.algebra.zero()
        for i in range(1, self.algebra.dim + 1):
            total = total + self.algebra.basis_vector(i) * self.partial(i)._eval_point(x)
        return total


def dual_field(field: FieldEvaluator, name: str | None = None) -> FieldEvaluator:
    """Pointwise dual: x -> F(x) I_n^{-1}."""
    alg = field.algebra
    dual_name = name or f"{field.name}_dual"
    if isinstance(field, PolyField):
        inv = alg.pseudoscalar_inverse()
        polys: dict[int, Polynomial] = {}
        for mask, poly in field.blade_polys.items():
            prod = alg.blade(mask) * inv
            (target,) = np.flatnonzero(prod.coeffs)
            scaled = poly * float(prod.coeffs[target])
            polys[int(target)] = polys.get(int(target), Polynomial(alg.dim)) + scaled
        return PolyField(dual_name, alg, polys)
    grades = {alg.dim - g for g in field.codomain_grades}
    return FieldEvaluator(dual_name, alg, lambda x: field(x).dual(), grades,
                          domain_dim=field.domain_dim)


def random_polynomial(rng: np.random.Generator, nvars: int, max_degree: int = 3,
                      coeff_range: int = 3) -> Polynomial:
    """Random integer-coefficient polynomial, at least one nonzero term."""
    while True:
        terms: dict[Monomial, float] = {}
        for exps in _monomials_up_to(nvars, max_degree):
            coeff = int(rng.integers(-coeff_range, coeff_range + 1))
            if coeff and rng.random() < 0.4:
                terms[exps] = float(coeff)
        poly = Polynomial(nvars, terms)
        if poly.terms:
            return poly


def _monomials_up_to(nvars: int, max_degree: int) -> list[Monomial]:
    out: list[Monomial] = []

    def rec(prefix: tuple[int, ...], remaining: int):
        if len(prefix) == nvars:
            out.append(prefix)
            return
        for e in range(remaining + 1):
            rec(prefix + (e,), remaining - e)

    rec((), max_degree)
    return out


# ---------------------------------------------------------------------------
# Field registry
# ---------------------------------------------------------------------------

def _p(nvars: int, spec: Mapping[Monomial, float]) -> Polynomial:
    return Polynomial(nvars, spec)


@lru_cache(maxsize=1)
def builtin_fields() -> dict[str, FieldEvaluator]:
    """The named field library.

    Polynomial entries are exact; ``toroidal_bivector`` is the one
    non-polynomial member (ring-shaped circulation used by the torus
    scene and quadrature smoke tests).
    """
    g1, g2, g3, g4 = Algebra(1), Algebra(2), Algebra(3), Algebra(4)
    x, y = Polynomial.variable(2, 1), Polynomial.variable(2, 2)
    x3, y3, z3 = (Polynomial.variable(3, i) for i in (1, 2, 3))

    fields: list[FieldEvaluator] = [
        # f(x) = x^3 on the line; drives the fundamental-theorem case.
        PolyField("cubic1d", g1, {0b0: _p(1, {(3,): 1.0})}),
        # Circulating and radial plane fields.
        PolyField("rotor2d", g2, {0b01: -1.0 * y, 0b10: x}),
        PolyField("radial2d", g2, {0b01: x, 0b10: y}),
        # A conservative field: the gradient of x1^2 x2.
        PolyField("grad_poly2d", g2, {0b01: 2.0 * (x * y), 0b10: x * x}),
        # Their 3D cousins.
        PolyField("rotor3d", g3, {0b001: -1.0 * y3, 0b010: x3}),
        PolyField("radial3d", g3, {0b001: x3, 0b010: y3, 0b100: z3}),
        # B = I3 x: tangent bivector of spheres about the origin.
        PolyField("radial_spin3d", g3, {0b110: x3, 0b101: -1.0 * y3, 0b011: z3}),
        # B = x1 e12: the bivector field with a constant vector divergence.
        PolyField("linear_bivector", g3, {0b011: x3}),
        # B = x1 e14 in R^4: nonzero quadvector term of the boundary theorem.
        PolyField("hyper_bivector", g4, {0b1001: Polynomial.variable(4, 1)}),
    ]
    registry = {f.name: f for f in fields}
    # rotor3d I3^{-1}: bivector field whose vector divergence realizes the
    # curl-theorem variant (dual of the volume inner part).
    registry["rotor3d_dual"] = dual_field(registry["rotor3d"])
    registry["toroidal_bivector"] = _toroidal_bivector(g3)
    registry["monopole_potential"] = _monopole_potential(g3)
    return registry


def get_field(name: str) -> FieldEvaluator:
    try:
        return builtin_fields()[name]
    except KeyError:
        known = ", ".join(sorted(builtin_fields()))
        raise KeyError(f"unknown field {name!r}; known fields: {known}") from None


def _toroidal_bivector(g3: Algebra, ring_radius: float = 2.0) -> FieldEvaluator:
    """Ring-shaped bivector circulation around the circle x^2+y^2 = R^2, z=0.

    At each point the bivector is the plane spanned by the local tube
    directions (radial-vertical plane twisted around the ring), scaled
    by a smooth bump so the field decays away from the core.
    """

    def evaluate(p: np.ndarray) -> Multivector:
        x, y, z = p
        rho = np.hypot(x, y)
        if rho < 1e-12:
            return g3.zero()
        c, s = x / rho, y / rho
        # Unit vectors: radial in the xy-plane and vertical.
        radial = g3.vector([c, s, 0.0])
        vertical = g3.vector([0.0, 0.0, 1.0])
        amp = np.exp(-((rho - ring_radius) ** 2 + z**2))
        return amp * (radial ^ vertical)

    return FieldEvaluator("toroidal_bivector", g3, evaluate, {2})


def _monopole_potential(g3: Algebra) -> FieldEvaluator:
    """Radial bivector flux I3 x / |x|^3: spherically symmetric, singular
    at the origin; shipped for rendering only."""

    def evaluate(p: np.ndarray) -> Multivector:
        r = float(np.linalg.norm(p))
        if r < 1e-12:
            raise ValueError("monopole_potential is singular at the origin")
        coeffs = np.zeros(g3.size)
        coeffs[0b110] = p[0] / r**3
        coeffs[0b101] = -p[1] / r**3
        coeffs[0b011] = p[2] / r**3
        return Multivector(g3, coeffs)

    return FieldEvaluator("monopole_potential", g3, evaluate, {2})
