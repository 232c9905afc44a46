"""Parametrized manifolds carrying directed (multivector-valued) measures.

A :class:`Chart` maps the unit box [0,1]^m smoothly into R^n; a
:class:`Manifold` is a finite list of charts plus a generator for its
boundary manifold.  The directed measure of a chart at a parameter
point is the wedge of the tangent vectors — an m-vector — times the
chart orientation, so integrals of multivector pairings over the
manifold become plain quadrature sums.

The one global orientation convention: a boundary chart is oriented so
that its measure equals the volume measure contracted (fat dot) with
the outward unit normal.  Concretely the disk with measure ``e12 dA``
gets a clockwise-traversed circle (tangent ``e12 . n``), and the ball
with measure ``e123 dV`` gets a sphere measured by the outward tangent
bivector ``I3 n``.  Every builtin boundary below is written in that
convention; the verification cases check it globally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .algebra import Algebra, Multivector, batch_product

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Chart:
    """Smooth map [0,1]^param_dim -> R^ambient_dim with an orientation sign.

    ``mapping`` and ``jacobian`` are vectorized: mapping takes parameter
    stacks of shape ``(N, param_dim)`` to point stacks ``(N,
    ambient_dim)``; jacobian returns tangent stacks ``(N, ambient_dim,
    param_dim)``.  A chart with ``param_dim == 0`` represents a signed
    point (its measure is the scalar ``orientation``).
    """

    param_dim: int
    ambient_dim: int
    mapping: Callable[[np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray], np.ndarray] | None = None
    orientation: int = 1

    def _params(self, us: np.ndarray) -> np.ndarray:
        us = np.asarray(us, dtype=float)
        if self.param_dim == 0:
            return us if us.ndim == 2 else us.reshape(1, 0)
        return us.reshape(-1, self.param_dim)

    def points(self, us: np.ndarray) -> np.ndarray:
        us = self._params(us)
        pts = np.asarray(self.mapping(us), dtype=float)
        return pts.reshape(len(us), self.ambient_dim)

    def tangents(self, us: np.ndarray) -> np.ndarray:
        """Tangent frames at each parameter point, shape (N, n, m)."""
        us = self._params(us)
        if self.jacobian is not None:
            jac = np.asarray(self.jacobian(us), dtype=float)
            return jac.reshape(len(us), self.ambient_dim, self.param_dim)
        # Central-difference fallback for user charts without an
        # analytic jacobian.
        h = 1e-6
        jac = np.empty((len(us), self.ambient_dim, self.param_dim))
        for k in range(self.param_dim):
            shift = np.zeros(self.param_dim)
            shift[k] = h
            jac[:, :, k] = (self.points(us + shift) - self.points(us - shift)) / (2 * h)
        return jac


@dataclass(frozen=True)
class Manifold:
    """An oriented m-dimensional cell complex: charts plus boundary recipe."""

    name: str
    dim: int
    ambient_dim: int
    charts: tuple[Chart, ...]
    boundary_factory: Callable[[], "Manifold"] | None = None
    tangent_mask: int | None = None

    def __post_init__(self):
        for c in self.charts:
            if c.param_dim != self.dim or c.ambient_dim != self.ambient_dim:
                raise ValueError(
                    f"chart of shape ({c.param_dim}->{c.ambient_dim}) does not fit "
                    f"manifold {self.name!r} ({self.dim}->{self.ambient_dim})")

    @property
    def is_empty(self) -> bool:
        return not self.charts

    def __repr__(self) -> str:
        return (f"<manifold {self.name!r}: dim {self.dim} in R^{self.ambient_dim}, "
                f"{len(self.charts)} charts>")


@dataclass(frozen=True)
class DirectedMeasure:
    """The m-vector integration element at one quadrature node."""

    mvector: Multivector
    weight: float = 1.0

    def __post_init__(self):
        grades = self.mvector.grades()
        if len(grades) > 1:
            raise ValueError(f"directed measure is not homogeneous: grades {grades}")


class DegenerateMeasureError(ValueError):
    """Raised when a chart's tangent frame has zero wedge at a node."""


def boundary_of(manifold: Manifold) -> Manifold:
    """Boundary manifold with the induced orientation.

    Closed builtins return an empty manifold (no charts); manifolds
    without a boundary recipe raise ``ValueError``.
    """
    if manifold.boundary_factory is None:
        raise ValueError(f"manifold {manifold.name!r} has no boundary generator")
    return manifold.boundary_factory()


def measures_batch(chart: Chart, us: np.ndarray, algebra: Algebra) -> np.ndarray:
    """Directed-measure coefficient stack (N, 2**dim) at parameter points."""
    if chart.ambient_dim != algebra.dim:
        raise ValueError(
            f"chart lives in R^{chart.ambient_dim}, algebra is G_{algebra.dim}")
    us = chart._params(us)
    n_pts = len(us)
    if chart.param_dim == 0:
        out = np.zeros((n_pts, algebra.size))
        out[:, 0] = float(chart.orientation)
        return out
    jac = chart.tangents(us)
    acc = _vectors_to_coeffs(algebra, jac[:, :, 0])
    for k in range(1, chart.param_dim):
        acc = batch_product(algebra, acc, _vectors_to_coeffs(algebra, jac[:, :, k]),
                            algebra.outer_mask)
    norms = np.linalg.norm(acc, axis=1)
    if np.any(norms == 0.0):
        raise DegenerateMeasureError(
            f"degenerate tangent frame at parameter(s) {us[norms == 0.0][:3]}")
    return float(chart.orientation) * acc


def directed_measure(chart: Chart, u: Sequence[float], algebra: Algebra,
                     weight: float = 1.0) -> DirectedMeasure:
    """The oriented m-vector element of ``chart`` at one parameter point."""
    coeffs = measures_batch(chart, np.asarray(u, dtype=float).reshape(1, -1), algebra)[0]
    return DirectedMeasure(Multivector(algebra, coeffs), weight)


def _vectors_to_coeffs(algebra: Algebra, vecs: np.ndarray) -> np.ndarray:
    out = np.zeros((len(vecs), algebra.size))
    for i in range(algebra.dim):
        out[:, 1 << i] = vecs[:, i]
    return out


# ---------------------------------------------------------------------------
# Builtin manifold library
# ---------------------------------------------------------------------------

def _embed(center: np.ndarray, xyz: np.ndarray) -> np.ndarray:
    """Place 3D coordinates into len(center)-dimensional ambient space."""
    out = np.tile(center, (len(xyz), 1))
    out[:, :3] += xyz
    return out


def _empty_manifold(name: str, dim: int, ambient_dim: int) -> Manifold:
    return Manifold(name, max(dim, 0), ambient_dim, (),
                    boundary_factory=lambda: _empty_manifold(name + "_boundary",
                                                             dim - 1, ambient_dim))


def _point_chart(point: Sequence[float], orientation: int) -> Chart:
    point = np.asarray(point, dtype=float)

    def mapping(us, point=point):
        return np.tile(point, (len(us), 1))

    return Chart(0, len(point), mapping, orientation=orientation)


def segment(a: float = 0.0, b: float = 1.0) -> Manifold:
    """The oriented interval [a, b] on the line (1-cell in R^1)."""
    a, b = float(a), float(b)

    def mapping(us):
        return a + (b - a) * us

    def jacobian(us):
        return np.full((len(us), 1, 1), b - a)

    def boundary() -> Manifold:
        return Manifold("segment_boundary", 0, 1,
                        (_point_chart([b], +1), _point_chart([a], -1)),
                        boundary_factory=lambda: _empty_manifold(
                            "segment_boundary_boundary", -1, 1))

    return Manifold("segment", 1, 1, (Chart(1, 1, mapping, jacobian),),
                    boundary_factory=boundary)


def _arc_chart(center: np.ndarray, radius: float, theta0: float, dtheta: float) -> Chart:
    """Circle arc theta0 .. theta0+dtheta (signed dtheta sets the direction)."""

    def mapping(us, c=center, r=radius, t0=theta0, dt=dtheta):
        th = t0 + dt * us[:, 0]
        return np.stack([c[0] + r * np.cos(th), c[1] + r * np.sin(th)], axis=1)

    def jacobian(us, r=radius, t0=theta0, dt=dtheta):
        th = t0 + dt * us[:, 0]
        return (r * dt * np.stack([-np.sin(th), np.cos(th)], axis=1))[:, :, None]

    return Chart(1, 2, mapping, jacobian)


def circle(radius: float = 1.0, center: Sequence[float] = (0.0, 0.0),
           arcs: int = 4, clockwise: bool = False) -> Manifold:
    """Closed circle in R^2, counterclockwise unless ``clockwise``."""
    center = np.asarray(center, dtype=float)
    dtheta = -TWO_PI / arcs if clockwise else TWO_PI / arcs
    charts = tuple(
        _arc_chart(center, radius, j * dtheta, dtheta) for j in range(arcs))
    name = "circle_cw" if clockwise else "circle"
    return Manifold(name, 1, 2, charts,
                    boundary_factory=lambda: _empty_manifold(name + "_boundary", 0, 2))


def disk(radius: float = 1.0, center: Sequence[float] = (0.0, 0.0),
         sectors: int = 4) -> Manifold:
    """Solid disk with measure ``+e12 dA``; boundary circle is clockwise
    (the induced orientation ``e12 . n``)."""
    center = np.asarray(center, dtype=float)
    charts = []
    for j in range(sectors):
        theta0 = TWO_PI * j / sectors
        dtheta = TWO_PI / sectors

        def mapping(us, c=center, r=radius, t0=theta0, dt=dtheta):
            rad = r * us[:, 0]
            th = t0 + dt * us[:, 1]
            return np.stack([c[0] + rad * np.cos(th), c[1] + rad * np.sin(th)], axis=1)

        def jacobian(us, r=radius, t0=theta0, dt=dtheta):
            rad = r * us[:, 0]
            th = t0 + dt * us[:, 1]
            jac = np.empty((len(us), 2, 2))
            jac[:, 0, 0] = r * np.cos(th)
            jac[:, 1, 0] = r * np.sin(th)
            jac[:, 0, 1] = -dt * rad * np.sin(th)
            jac[:, 1, 1] = dt * rad * np.cos(th)
            return jac

        charts.append(Chart(2, 2, mapping, jacobian))
    return Manifold(
        "disk", 2, 2, tuple(charts),
        boundary_factory=lambda: circle(radius, center, arcs=sectors, clockwise=True))


def annulus(inner_radius: float = 0.5, outer_radius: float = 1.0,
            center: Sequence[float] = (0.0, 0.0), sectors: int = 4) -> Manifold:
    """Ring between two radii; boundary = outer circle clockwise plus
    inner circle counterclockwise (outward normal points into the hole)."""
    center = np.asarray(center, dtype=float)
    r0, r1 = float(inner_radius), float(outer_radius)
    charts = []
    for j in range(sectors):
        theta0 = TWO_PI * j / sectors
        dtheta = TWO_PI / sectors

        def mapping(us, c=center, t0=theta0, dt=dtheta):
            rad = r0 + (r1 - r0) * us[:, 0]
            th = t0 + dt * us[:, 1]
            return np.stack([c[0] + rad * np.cos(th), c[1] + rad * np.sin(th)], axis=1)

        def jacobian(us, t0=theta0, dt=dtheta):
            rad = r0 + (r1 - r0) * us[:, 0]
            th = t0 + dt * us[:, 1]
            jac = np.empty((len(us), 2, 2))
            jac[:, 0, 0] = (r1 - r0) * np.cos(th)
            jac[:, 1, 0] = (r1 - r0) * np.sin(th)
            jac[:, 0, 1] = -dt * rad * np.sin(th)
            jac[:, 1, 1] = dt * rad * np.cos(th)
            return jac

        charts.append(Chart(2, 2, mapping, jacobian))

    def boundary() -> Manifold:
        outer = circle(r1, center, arcs=sectors, clockwise=True)
        inner = circle(r0, center, arcs=sectors, clockwise=False)
        return Manifold("annulus_boundary", 1, 2, outer.charts + inner.charts,
                        boundary_factory=lambda: _empty_manifold(
                            "annulus_boundary_boundary", 0, 2))

    return Manifold("annulus", 2, 2, tuple(charts), boundary_factory=boundary)


def _sphere_chart(center: np.ndarray, radius: float, phi0: float, dphi: float,
                  theta0: float, dtheta: float) -> Chart:
    """Sphere panel: u1 sweeps polar angle phi, u2 sweeps azimuth theta.

    The (d/dphi) ^ (d/dtheta) ordering makes the measure the outward
    tangent bivector ``I3 n * r^2 sin(phi)``.
    """
    ambient = len(center)

    def mapping(us, c=center, r=radius):
        phi = phi0 + dphi * us[:, 0]
        th = theta0 + dtheta * us[:, 1]
        sp, cp = np.sin(phi), np.cos(phi)
        xyz = r * np.stack([sp * np.cos(th), sp * np.sin(th), cp], axis=1)
        return _embed(c, xyz)

    def jacobian(us, r=radius):
        phi = phi0 + dphi * us[:, 0]
        th = theta0 + dtheta * us[:, 1]
        sp, cp = np.sin(phi), np.cos(phi)
        st, ct = np.sin(th), np.cos(th)
        jac = np.zeros((len(us), ambient, 2))
        jac[:, 0, 0] = r * dphi * cp * ct
        jac[:, 1, 0] = r * dphi * cp * st
        jac[:, 2, 0] = -r * dphi * sp
        jac[:, 0, 1] = -r * dtheta * sp * st
        jac[:, 1, 1] = r * dtheta * sp * ct
        return jac

    return Chart(2, ambient, mapping, jacobian)


def sphere2(radius: float = 1.0, center: Sequence[float] = (0.0, 0.0, 0.0),
            polar_panels: int = 2, azimuth_panels: int = 4) -> Manifold:
    """Round 2-sphere with outward bivector measure ``I3 n dS``.

    A center of length 4 embeds the sphere in the 3-plane of R^4
    parallel to e123 through that center.
    """
    center = np.asarray(center, dtype=float)
    charts = []
    for i in range(polar_panels):
        for j in range(azimuth_panels):
            charts.append(_sphere_chart(
                center, radius,
                math.pi * i / polar_panels, math.pi / polar_panels,
                TWO_PI * j / azimuth_panels, TWO_PI / azimuth_panels))
    name = "sphere" if len(center) == 3 else "sphere_h4"
    mask = 0b111 if len(center) == 4 else None
    return Manifold(name, 2, len(center), tuple(charts),
                    boundary_factory=lambda: _empty_manifold(name + "_boundary", 1,
                                                             len(center)),
                    tangent_mask=mask)


def ball3(radius: float = 1.0, center: Sequence[float] = (0.0, 0.0, 0.0),
          polar_panels: int = 2, azimuth_panels: int = 4) -> Manifold:
    """Solid ball with measure ``e123 dV``; boundary is the outward sphere.

    A center of length 4 embeds the ball in an e123-parallel hyperplane
    of R^4, where its tangent blade is e123 (``tangent_mask``).
    """
    center = np.asarray(center, dtype=float)
    ambient = len(center)
    charts = []
    for i in range(polar_panels):
        for j in range(azimuth_panels):
            phi0, dphi = math.pi * i / polar_panels, math.pi / polar_panels
            theta0, dtheta = TWO_PI * j / azimuth_panels, TWO_PI / azimuth_panels

            def mapping(us, c=center, r=radius, p0=phi0, dp=dphi, t0=theta0, dt=dtheta):
                rad = r * us[:, 0]
                phi = p0 + dp * us[:, 1]
                th = t0 + dt * us[:, 2]
                sp, cp = np.sin(phi), np.cos(phi)
                xyz = np.stack([rad * sp * np.cos(th), rad * sp * np.sin(th),
                                rad * cp], axis=1)
                return _embed(c, xyz)

            def jacobian(us, r=radius, p0=phi0, dp=dphi, t0=theta0, dt=dtheta):
                rad = r * us[:, 0]
                phi = p0 + dp * us[:, 1]
                th = t0 + dt * us[:, 2]
                sp, cp = np.sin(phi), np.cos(phi)
                st, ct = np.sin(th), np.cos(th)
                jac = np.zeros((len(us), ambient, 3))
                jac[:, 0, 0] = r * sp * ct
                jac[:, 1, 0] = r * sp * st
                jac[:, 2, 0] = r * cp
                jac[:, 0, 1] = rad * dp * cp * ct
                jac[:, 1, 1] = rad * dp * cp * st
                jac[:, 2, 1] = -rad * dp * sp
                jac[:, 0, 2] = -rad * dt * sp * st
                jac[:, 1, 2] = rad * dt * sp * ct
                return jac

            charts.append(Chart(3, ambient, mapping, jacobian))
    name = "ball" if ambient == 3 else "ball_h4"
    return Manifold(
        name, 3, ambient, tuple(charts),
        boundary_factory=lambda: sphere2(radius, center, polar_panels, azimuth_panels),
        tangent_mask=0b111 if ambient == 4 else None)


def torus(ring_radius: float = 2.0, tube_radius: float = 0.5,
          ring_panels: int = 4, tube_panels: int = 4) -> Manifold:
    """Torus of revolution about e3 with outward-oriented measure."""
    a, b = float(ring_radius), float(tube_radius)
    charts = []
    for i in range(ring_panels):
        for j in range(tube_panels):
            a0, da = TWO_PI * i / ring_panels, TWO_PI / ring_panels
            b0, db = TWO_PI * j / tube_panels, TWO_PI / tube_panels

            def mapping(us, a0=a0, da=da, b0=b0, db=db):
                al = a0 + da * us[:, 0]
                be = b0 + db * us[:, 1]
                w = a + b * np.cos(be)
                return np.stack([w * np.cos(al), w * np.sin(al), b * np.sin(be)],
                                axis=1)

            def jacobian(us, a0=a0, da=da, b0=b0, db=db):
                al = a0 + da * us[:, 0]
                be = b0 + db * us[:, 1]
                w = a + b * np.cos(be)
                jac = np.empty((len(us), 3, 2))
                jac[:, 0, 0] = -da * w * np.sin(al)
                jac[:, 1, 0] = da * w * np.cos(al)
                jac[:, 2, 0] = 0.0
                jac[:, 0, 1] = -db * b * np.sin(be) * np.cos(al)
                jac[:, 1, 1] = -db * b * np.sin(be) * np.sin(al)
                jac[:, 2, 1] = db * b * np.cos(be)
                return jac

            charts.append(Chart(2, 3, mapping, jacobian))
    return Manifold("torus", 2, 3, tuple(charts),
                    boundary_factory=lambda: _empty_manifold("torus_boundary", 1, 3))


MANIFOLD_BUILDERS: dict[str, Callable[..., Manifold]] = {
    "segment": segment,
    "circle": circle,
    "disk": disk,
    "annulus": annulus,
    "sphere": sphere2,
    "ball": ball3,
    "torus": torus,
}


def get_manifold(name: str, **params) -> Manifold:
    try:
        builder = MANIFOLD_BUILDERS[name]
    except KeyError:
        known = ", ".join(sorted(MANIFOLD_BUILDERS))
        raise KeyError(f"unknown manifold {name!r}; known manifolds: {known}") from None
    return builder(**params)
