"""The boundary-theorem case catalogue.

Each case instantiates ``integral over M of (measure pairing
derivative-part of F) = integral over boundary of M of (measure pairing
F)`` for one manifold, field, and pairing combination, and computes the
two sides by disjoint routes: the volume side differentiates the field
numerically at interior quadrature nodes, the boundary side only ever
evaluates the raw field on boundary charts.

The catalogue:

== ========================== ================= ===================================
id statement                  manifold/field    anchor
== ========================== ================= ===================================
C0 fundamental theorem        segment, x^3      1
C1 circulation (curl) part    disk, rotor2d     -2*pi
C2 flux (divergence) part     disk, radial2d    2*pi e12
C3 volume curl part           ball, I3 x        -4*pi
C4 volume divergence part     ball, x1 e12      -(4*pi/3) e13   (= +(4*pi/3) e31)
C5 quadvector part in R^4     ball in e4=0      (4*pi/3) e1234
C6 curl-theorem variant       ball, dual rotor  (8*pi/3) e12
C7 classical divergence thm   ball, x (dV, ndS) 4*pi
C8 closed-path gradient       disk, grad field  0
== ========================== ================= ===================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Mapping

import numpy as np

from .algebra import Algebra, Multivector
from .derivative import (DEFAULT_SCHEME, DerivativePartField, DerivativeScheme,
                         divergence, fd_curl_field, fd_gradient_field)
from .fields import FieldEvaluator, PolyField, Polynomial, dual_field, get_field, \
    random_polynomial
from .manifolds import Manifold, boundary_of, circle, get_manifold
from .quadrature import QuadratureRule, convergence_study, integrate_directed

REL_ERR_FLOOR = 1.0  # all registered fields are O(1) on their manifolds


@dataclass(frozen=True)
class CaseSpec:
    """One boundary-theorem instance: what to integrate, where, and how."""

    id: str
    title: str
    manifold: str
    field: str
    part: str                      # derivative part on the volume side
    lhs_pairing: str
    rhs_pairing: str
    result_grades: frozenset[int]
    anchor: tuple[tuple[int, float], ...] | None = None
    derivative: str = "full"       # "full" nabla or "tangential"
    dualize_measure: bool = False
    manifold_params: tuple[tuple[str, object], ...] = ()
    note: str = ""

    def build_manifold(self) -> Manifold:
        return get_manifold(self.manifold, **dict(self.manifold_params))

    def anchor_multivector(self, algebra: Algebra) -> Multivector | None:
        if self.anchor is None:
            return None
        out = algebra.zero()
        for mask, coeff in self.anchor:
            out = out + algebra.blade(mask, coeff)
        return out


@dataclass(frozen=True)
class CaseReport:
    """Both sides of one case plus error and convergence bookkeeping."""

    case_id: str
    order: int
    lhs: Multivector
    rhs: Multivector
    abs_err: float
    rel_err: float
    slope: float          # decades of boundary-side error removed per order
    at_floor: bool        # convergence sweep bottomed out at machine noise
    anchor_rel_err: float | None
    result_grades: frozenset[int]

    def passes(self, tolerance: float) -> bool:
        ok = self.rel_err <= tolerance
        if self.anchor_rel_err is not None:
            ok = ok and self.anchor_rel_err <= max(tolerance, 1e-6)
        return ok


class GradeMismatchError(ValueError):
    """A case side produced grades outside the declared result grades."""


@lru_cache(maxsize=1)
def builtin_cases() -> dict[str, CaseSpec]:
    pi = math.pi
    specs = [
        CaseSpec(
            "C0", "fundamental theorem on a segment",
            manifold="segment", field="cubic1d", part="full",
            lhs_pairing="geometric", rhs_pairing="geometric",
            result_grades=frozenset({0}), anchor=((0b0, 1.0),),
            manifold_params=(("a", 0.0), ("b", 1.0)),
            note="integral of dx f' equals the signed endpoint values"),
        CaseSpec(
            "C1", "circulation of a plane rotor field",
            manifold="disk", field="rotor2d", part="curl",
            lhs_pairing="inner", rhs_pairing="inner",
            result_grades=frozenset({0}), anchor=((0b00, -2.0 * pi),),
            note="dx2 . (nabla ^ F) against the boundary line integral"),
        CaseSpec(
            "C2", "flux of a radial plane field",
            manifold="disk", field="radial2d", part="div",
            lhs_pairing="outer", rhs_pairing="outer",
            result_grades=frozenset({2}), anchor=((0b11, 2.0 * pi),),
            note="dx2 ^ (nabla . F); the 2D divergence theorem, bivector-valued"),
        CaseSpec(
            "C3", "volume curl of the radial spin bivector",
            manifold="ball", field="radial_spin3d", part="curl",
            lhs_pairing="inner", rhs_pairing="inner",
            result_grades=frozenset({0}), anchor=((0b000, -4.0 * pi),),
            note="trivector density inside vs tangent bivectors on the sphere"),
        CaseSpec(
            "C4", "volume divergence of a linear bivector field",
            manifold="ball", field="linear_bivector", part="div",
            lhs_pairing="inner", rhs_pairing="commutator",
            result_grades=frozenset({2}),
            anchor=((0b101, -4.0 * pi / 3.0),),
            note="dx3 . (nabla . B) vs the commutator dx2 x B; anchor is "
                 "(4*pi/3) e31"),
        CaseSpec(
            "C5", "quadvector term of a ball embedded in R^4",
            manifold="ball", field="hyper_bivector", part="div",
            lhs_pairing="outer", rhs_pairing="outer",
            result_grades=frozenset({4}),
            anchor=((0b1111, 4.0 * pi / 3.0),),
            derivative="tangential",
            manifold_params=(("center", (0.0, 0.0, 0.0, 0.0)),),
            note="tangential divergence points along e4; both sides grade 4"),
        CaseSpec(
            "C6", "curl-theorem variant (dual of the volume divergence case)",
            manifold="ball", field="rotor3d_dual", part="div",
            lhs_pairing="inner", rhs_pairing="commutator",
            result_grades=frozenset({2}),
            anchor=((0b011, 8.0 * pi / 3.0),),
            note="volume integral of the curl vector vs -F x n on the sphere, "
                 "phrased through the dual bivector field"),
        CaseSpec(
            "C7", "classical divergence theorem",
            manifold="ball", field="radial3d", part="div",
            lhs_pairing="geometric", rhs_pairing="inner",
            result_grades=frozenset({0}), anchor=((0b000, 4.0 * pi),),
            dualize_measure=True,
            note="measures dualized to scalar dV and normal n dS"),
        CaseSpec(
            "C8", "closed-path integral of a gradient field",
            manifold="disk", field="grad_poly2d", part="curl",
            lhs_pairing="inner", rhs_pairing="inner",
            result_grades=frozenset({0}), anchor=((0b00, 0.0),),
            note="conservative fields circulate to zero; anchor is exact zero"),
    ]
    return {s.id: s for s in specs}


def get_case(case_id: str) -> CaseSpec:
    try:
        return builtin_cases()[case_id]
    except KeyError:
        known = ", ".join(builtin_cases())
        raise KeyError(f"unknown case {case_id!r}; known cases: {known}") from None


def _volume_integrand(spec: CaseSpec, base: FieldEvaluator, manifold: Manifold,
                      scheme: DerivativeScheme) -> FieldEvaluator:
    tangent = None
    if spec.derivative == "tangential":
        if manifold.tangent_mask is None:
            raise ValueError(
                f"case {spec.id}: manifold {manifold.name!r} has no tangent blade")
        tangent = base.algebra.blade(manifold.tangent_mask)
    return DerivativePartField(base, spec.part, tangent=tangent, scheme=scheme)


def _observed_grades(mv: Multivector, threshold: float) -> set[int]:
    scale = max(mv.norm(), 1.0)
    alg = mv.algebra
    return {int(alg.grades[m]) for m in np.flatnonzero(
        np.abs(mv.coeffs) > threshold * scale)}


def run_case(spec: CaseSpec | str, rule: QuadratureRule | None = None,
             scheme: DerivativeScheme = DEFAULT_SCHEME,
             convergence_orders: tuple[int, ...] | None = None,
             field: FieldEvaluator | None = None) -> CaseReport:
    """Compute both sides of a case and report errors.

    The two sides share no intermediate values: the volume side
    integrates a finite-difference derivative part of the field, the
    boundary side integrates the field itself over the induced-oriented
    boundary charts.  ``field`` substitutes the registered field (the
    theorem still holds for any smooth field, but the closed-form
    anchor check will flag the substitution).
    """
    if isinstance(spec, str):
        spec = get_case(spec)
    rule = rule or QuadratureRule()
    volume = spec.build_manifold()
    base = field if field is not None else get_field(spec.field)
    integrand = _volume_integrand(spec, base, volume, scheme)
    lhs = integrate_directed(volume, spec.lhs_pairing, integrand, rule,
                             dualize_measure=spec.dualize_measure)

    boundary = boundary_of(volume)

    def rhs_at(order: int) -> Multivector:
        return integrate_directed(boundary, spec.rhs_pairing, base,
                                  QuadratureRule(order),
                                  dualize_measure=spec.dualize_measure)

    rhs = rhs_at(rule.order)

    for side_name, side in (("lhs", lhs), ("rhs", rhs)):
        extra = _observed_grades(side, 1e-8) - spec.result_grades
        if extra:
            raise GradeMismatchError(
                f"case {spec.id}: {side_name} contains unexpected grades {extra}")

    abs_err = (lhs - rhs).norm()
    rel_err = abs_err / max(lhs.norm(), rhs.norm(), REL_ERR_FLOOR)

    anchor = spec.anchor_multivector(base.algebra)
    anchor_rel_err = None
    if anchor is not None:
        anchor_rel_err = max(
            (lhs - anchor).norm(), (rhs - anchor).norm()
        ) / max(anchor.norm(), REL_ERR_FLOOR)

    orders = convergence_orders or tuple(
        sorted({max(2, rule.order - 4), max(3, rule.order - 2), rule.order}))
    study = convergence_study(rhs_at, orders)
    return CaseReport(
        case_id=spec.id, order=rule.order, lhs=lhs, rhs=rhs,
        abs_err=abs_err, rel_err=rel_err,
        slope=study.rate_per_order, at_floor=study.at_floor,
        anchor_rel_err=anchor_rel_err, result_grades=spec.result_grades)


def run_suite(case_ids: list[str] | None = None,
              rule: QuadratureRule | None = None) -> list[CaseReport]:
    ids = case_ids if case_ids is not None else list(builtin_cases())
    return [run_case(get_case(cid), rule) for cid in ids]


# ---------------------------------------------------------------------------
# Duality between cases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DualityVerdict:
    """Consistency of a dual case pair (C1/C2 in 2D, C3/C7 in 3D)."""

    case_ids: tuple[str, str]
    field_identity_err: float   # max |dual mapping of one field - the other|
    closed_form_ok: bool        # anchors map onto each other exactly
    numeric_err: float          # same statement on computed reports

    def ok(self, tolerance: float = 1e-9) -> bool:
        return (self.closed_form_ok and self.field_identity_err == 0.0
                and self.numeric_err <= tolerance)


def dualize_case(case_id: str, rule: QuadratureRule | None = None) -> DualityVerdict:
    """Check that a case and its dual partner tell the same story.

    2D: the dual of ``rotor2d`` is ``radial2d`` and the C1 report
    right-multiplied by ``I2^{-1}`` must reproduce the C2 report.
    3D: ``radial_spin3d = I3 radial3d`` and the scalar results of C3 and
    C7 differ exactly by the ``I3^2 = -1`` duality sign.
    """
    rule = rule or QuadratureRule()
    rng = np.random.default_rng(42)
    if case_id in ("C1", "C2"):
        g2 = Algebra(2)
        rotor, radial = get_field("rotor2d"), get_field("radial2d")
        pts = rng.uniform(-2.0, 2.0, size=(25, 2))
        field_err = max(
            (rotor(x).dual() - radial(x)).norm() for x in pts)
        r1, r2 = run_case("C1", rule), run_case("C2", rule)
        a1 = builtin_cases()["C1"].anchor_multivector(g2)
        a2 = builtin_cases()["C2"].anchor_multivector(g2)
        closed = a1.dual() == a2
        numeric = max((r1.lhs.dual() - r2.lhs).norm(),
                      (r1.rhs.dual() - r2.rhs).norm())
        return DualityVerdict(("C1", "C2"), field_err, closed, numeric)
    if case_id in ("C3", "C7"):
        g3 = Algebra(3)
        spin, radial = get_field("radial_spin3d"), get_field("radial3d")
        i3 = g3.pseudoscalar()
        pts = rng.uniform(-2.0, 2.0, size=(25, 3))
        field_err = max((i3 * radial(x) - spin(x)).norm() for x in pts)
        r3, r7 = run_case("C3", rule), run_case("C7", rule)
        i3_sq = (i3 * i3).scalar_part()
        a3 = builtin_cases()["C3"].anchor_multivector(g3)
        a7 = builtin_cases()["C7"].anchor_multivector(g3)
        closed = i3_sq * a7 == a3
        numeric = max((i3_sq * r7.lhs - r3.lhs).norm(),
                      (i3_sq * r7.rhs - r3.rhs).norm())
        return DualityVerdict(("C3", "C7"), field_err, closed, numeric)
    raise ValueError(f"no duality mapping registered for case {case_id!r}")


# ---------------------------------------------------------------------------
# Identity suite: the classical differential identities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityReport:
    """Residuals of the closed-path / curl-grad / div-curl / Laplacian
    identities on random polynomial potentials, relative to field scale."""

    seed: int
    residuals: Mapping[str, float]

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    def ok(self, tolerance: float = 1e-6) -> bool:
        return self.max_residual <= tolerance


def identity_suite(seed: int = 2024, n_points: int = 5,
                   rule: QuadratureRule | None = None) -> IdentityReport:
    """Check the vanishing identities on random degree-<=3 potentials.

    * closed-path gradient circuit: integral of ``grad(phi) . dx`` over a
      closed circle is zero;
    * curl of a gradient is zero;
    * divergence of a curl is zero;
    * divergence of a gradient equals the analytic Laplacian.

    Nested (second-derivative) stencils run with the coarser ``h2`` step
    so the residuals stay at the 1e-8 level rather than amplifying
    roundoff.
    """
    rule = rule or QuadratureRule()
    rng = np.random.default_rng(seed)
    g2, g3 = Algebra(2), Algebra(3)
    outer = DerivativeScheme(h=DEFAULT_SCHEME.h2)

    phi2 = PolyField("phi2", g2, {0b00: random_polynomial(rng, 2, 3)})
    phi3 = PolyField("phi3", g3, {0b000: random_polynomial(rng, 3, 3)})
    vecpot = PolyField("A3", g3, {1 << i: random_polynomial(rng, 3, 3)
                                  for i in range(3)})
    pts3 = rng.uniform(-1.0, 1.0, size=(n_points, 3))

    # Closed-path gradient circuit in the plane.
    grad2 = fd_gradient_field(phi2)
    loop = integrate_directed(circle(), "inner", grad2, rule)
    loop_scale = max(1.0, float(np.max(np.abs(
        grad2.evaluate_batch(circle().charts[0].points(rule.nodes(1)[0]))))))
    residuals = {"closed_gradient_circuit": loop.norm() / loop_scale}

    # curl(grad phi) = 0.
    grad3 = fd_gradient_field(phi3)
    from .derivative import curl as classical_curl  # local alias for clarity
    curl_res = scale = 0.0
    for x in pts3:
        curl_res = max(curl_res, classical_curl(grad3, x, outer).norm())
        scale = max(scale, grad3(x).norm(), 1.0)
    residuals["curl_of_gradient"] = curl_res / scale

    # div(curl A) = 0.
    curl_a = fd_curl_field(vecpot)
    div_res = scale = 0.0
    for x in pts3:
        div_res = max(div_res, abs(divergence(curl_a, x, outer)))
        scale = max(scale, curl_a(x).norm(), 1.0)
    residuals["divergence_of_curl"] = div_res / scale

    # div(grad phi) = analytic Laplacian.
    poly = phi3.blade_polys[0b000]
    lap_poly = Polynomial(3)
    for i in (1, 2, 3):
        lap_poly = lap_poly + poly.diff(i).diff(i)
    lap_res = scale = 0.0
    for x in pts3:
        want = float(lap_poly(x))
        got = divergence(grad3, x, outer)
        lap_res = max(lap_res, abs(got - want))
        scale = max(scale, abs(want), 1.0)
    residuals["laplacian_consistency"] = lap_res / scale

    return IdentityReport(seed=seed, residuals=residuals)
