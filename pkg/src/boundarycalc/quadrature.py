"""Directed integration: Gauss-Legendre pairing sums over manifolds.

``integrate_directed`` evaluates ``sum_nodes weight * pairing(measure,
F(x))`` chart by chart with a tensor-product Gauss-Legendre rule.  The
accumulation order is fixed (charts in declaration order, nodes in
C-order), so results are bit-identical across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .algebra import Algebra, Multivector, batch_product
from .fields import FieldEvaluator
from .manifolds import Manifold, measures_batch

PAIRING_NAMES = ("geometric", "outer", "inner", "commutator")


@lru_cache(maxsize=None)
def _nodes_01(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped from [-1,1] to [0,1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    return (x + 1.0) / 2.0, w / 2.0


@dataclass(frozen=True)
class QuadratureRule:
    """Tensor-product Gauss-Legendre rule, ``order`` points per axis."""

    order: int = 8

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"quadrature order must be >= 1, got {self.order}")

    def nodes(self, param_dim: int) -> tuple[np.ndarray, np.ndarray]:
        """Nodes ``(order**m, m)`` and weights ``(order**m,)`` on [0,1]^m."""
        if param_dim == 0:
            return np.zeros((1, 0)), np.ones(1)
        x, w = _nodes_01(self.order)
        grids = np.meshgrid(*([x] * param_dim), indexing="ij")
        pts = np.stack([g.reshape(-1) for g in grids], axis=1)
        wgrids = np.meshgrid(*([w] * param_dim), indexing="ij")
        weights = np.ones(len(pts))
        for g in wgrids:
            weights = weights * g.reshape(-1)
        return pts, weights


def pair_batch(alg: Algebra, measures: np.ndarray, values: np.ndarray,
               pairing: str) -> np.ndarray:
    """Apply one of the four products row-wise to coefficient stacks."""
    if pairing == "geometric":
        return batch_product(alg, measures, values)
    if pairing == "outer":
        return batch_product(alg, measures, values, alg.outer_mask)
    if pairing == "inner":
        return batch_product(alg, measures, values, alg.inner_mask)
    if pairing == "commutator":
        return (batch_product(alg, measures, values)
                - batch_product(alg, values, measures)) / 2.0
    raise ValueError(f"unknown pairing {pairing!r}; expected one of {PAIRING_NAMES}")


def integrate_directed(manifold: Manifold, pairing: str, field: FieldEvaluator,
                       rule: QuadratureRule | None = None,
                       dualize_measure: bool = False) -> Multivector:
    """Integral of ``pairing(directed measure, field value)`` over a manifold.

    With ``dualize_measure`` each measure is right-multiplied by
    ``I_n^{-1}`` first, turning e.g. the ball's trivector element into
    the classical scalar ``dV`` and the sphere's tangent bivector into
    the outward normal ``n dS`` — the form the classical divergence
    theorem pairs with.
    """
    rule = rule or QuadratureRule()
    alg = field.algebra
    if manifold.ambient_dim != alg.dim:
        raise ValueError(
            f"manifold in R^{manifold.ambient_dim} vs field on G_{alg.dim}")
    if pairing not in PAIRING_NAMES:
        raise ValueError(f"unknown pairing {pairing!r}; expected one of {PAIRING_NAMES}")
    inv_coeffs = alg.pseudoscalar_inverse().coeffs if dualize_measure else None
    total = np.zeros(alg.size)
    for chart in manifold.charts:
        us, ws = rule.nodes(chart.param_dim)
        xs = chart.points(us)
        measures = measures_batch(chart, us, alg)
        if inv_coeffs is not None:
            measures = batch_product(alg, measures, inv_coeffs)
        values = field.evaluate_batch(xs)
        if not np.all(np.isfinite(values)):
            raise ValueError(f"field {field.name!r} is non-finite on {manifold.name!r}")
        contrib = pair_batch(alg, measures, values, pairing)
        total += (ws[:, None] * contrib).sum(axis=0)
    return Multivector(alg, total)


@dataclass(frozen=True)
class ConvergenceStudy:
    """Errors of a quadrature-order sweep against a refined reference."""

    orders: tuple[int, ...]
    errors: tuple[float, ...]
    reference_norm: float
    rate_per_order: float  # decades of error removed per unit of order
    at_floor: bool

    def __str__(self) -> str:
        rows = ", ".join(f"{o}:{e:.3e}" for o, e in zip(self.orders, self.errors))
        tail = "floor" if self.at_floor else f"{self.rate_per_order:.2f} decades/order"
        return f"orders {{{rows}}} -> {tail}"


def convergence_study(evaluate: Callable[[int], Multivector],
                      orders: Sequence[int], floor: float = 1e-12,
                      reference_margin: int = 4) -> ConvergenceStudy:
    """Error-vs-order sweep of ``evaluate(order)`` against a refined run.

    When every error sits at the floating-point floor the study reports
    ``at_floor`` (with an infinite rate) instead of fitting noise.
    """
    orders = sorted(int(o) for o in orders)
    if len(orders) < 3:
        raise ValueError("need at least 3 quadrature orders")
    reference = evaluate(orders[-1] + reference_margin)
    scale = max(1.0, reference.norm())
    errors = tuple((evaluate(o) - reference).norm() for o in orders)
    if max(errors) <= floor * scale:
        return ConvergenceStudy(tuple(orders), errors, reference.norm(),
                                math.inf, True)
    clamped = [max(e, 1e-300) for e in errors]
    rate = (math.log10(clamped[0]) - math.log10(clamped[-1])) / (orders[-1] - orders[0])
    return ConvergenceStudy(tuple(orders), errors, reference.norm(), rate, False)


def loglog_slope(xs: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(x)."""
    lx = np.log(np.asarray(xs, dtype=float))
    le = np.log(np.maximum(np.asarray(errors, dtype=float), 1e-300))
    slope, _ = np.polyfit(lx, le, 1)
    return float(slope)
