"""Deterministic SVG scenes for the shipped fields.

Glyph vocabulary (one CSS class per grade): scalars are dots whose
radius tracks the value, vectors are arrows, bivectors are discs with a
curved arrow giving the orientation sense (counterclockwise in field
coordinates = positive), trivectors are spheres drawn as a circle with
an equator.  3D scenes use a fixed orthographic projection — an
isometric view along (1,1,1) or a front view along e1 — so the same
scene always renders to the same bytes: no timestamps, no randomness,
and every coordinate printed through one fixed-precision formatter.

Shipped scenes:

* ``fig3_gradient``        dots of unequal size at the ends of a segment
* ``fig4_green``           plane rotor arrows around a circulation disc
* ``fig5_div2d``           radial arrows around a source dot
* ``fig6_radial_spin``     26 tangent discs on a sphere, one volume glyph
* ``fig7_toroidal``        ring of vertical discs (toroidal circulation)
* ``fig8b_vector_potential`` circulating arrows with their flux dot
* ``monopole_potential``   inverse-square tangent discs around a source
* ``projection_front_view`` the torus ring viewed along e1, where each
  disc collapses to its dual arrow and the layout matches the plane
  divergence scene
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import Algebra, Multivector
from .derivative import DerivativePartField
from .fields import get_field

VIEW = 420.0
HALF = VIEW / 2.0

G2, G3 = Algebra(2), Algebra(3)

_STYLE = """\
  <style>
    .glyph-scalar { fill: #c0392b; stroke: none; }
    .glyph-vector { stroke: #1a5276; stroke-width: 2; fill: #1a5276; }
    .glyph-bivector { stroke: #1e8449; stroke-width: 1.5; fill: #1e8449; }
    .glyph-bivector ellipse, .glyph-bivector circle { fill-opacity: 0.15; }
    .glyph-trivector { stroke: #7d3c98; stroke-width: 1.5; fill: #7d3c98; }
    .glyph-trivector circle { fill-opacity: 0.10; }
    .glyph-trivector ellipse { fill: none; stroke-dasharray: 4 3; }
  </style>"""


def _n(value: float) -> str:
    """Fixed-precision coordinate formatting (kills -0.00 jitter)."""
    if abs(value) < 0.005:
        value = 0.0
    return f"{value:.2f}"


# ---------------------------------------------------------------------------
# Projections: field coordinates -> screen pixels
# ---------------------------------------------------------------------------

def _project(point: np.ndarray, projection: str) -> tuple[float, float]:
    """Orthographic map to abstract (u, v) screen coordinates, v up."""
    p = np.zeros(3)
    p[: len(point)] = point
    if projection == "plane":
        return float(p[0]), float(p[1])
    if projection == "iso":
        return (0.866 * (p[0] - p[1]),
                float(p[2]) - 0.5 * (p[0] + p[1]))
    if projection == "front":
        return float(p[1]), float(p[2])
    raise ValueError(f"unknown projection {projection!r}")


_VIEW_DIRECTION = {
    # Unit vector the projection looks along (its kernel).
    "plane": np.array([0.0, 0.0, 1.0]),
    "iso": np.array([1.0, 1.0, 1.0]) / math.sqrt(3.0),
    "front": np.array([1.0, 0.0, 0.0]),
}


def _to_pixels(u: float, v: float, scale: float,
               center: tuple[float, float]) -> tuple[float, float]:
    return HALF + scale * (u - center[0]), HALF - scale * (v - center[1])


# ---------------------------------------------------------------------------
# Glyphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Glyph:
    """One drawable mark: kind, screen position, size, and orientation."""

    kind: str                # scalar | vector | bivector | trivector
    cx: float
    cy: float
    size: float
    angle: float = 0.0       # degrees, screen frame
    ratio: float = 1.0       # ellipse squash for tilted discs
    sense: int = 1           # bivector circulation sign


def _scalar_svg(g: Glyph) -> str:
    return (f'<circle class="glyph-scalar" cx="{_n(g.cx)}" cy="{_n(g.cy)}" '
            f'r="{_n(max(g.size, 1.0))}"/>')


def _vector_svg(g: Glyph) -> str:
    length = max(g.size, 2.0)
    rad = math.radians(g.angle)
    dx, dy = math.cos(rad), math.sin(rad)
    x1, y1 = g.cx - 0.5 * length * dx, g.cy - 0.5 * length * dy
    x2, y2 = g.cx + 0.5 * length * dx, g.cy + 0.5 * length * dy
    head = max(3.0, 0.25 * length)
    left = (x2 - head * dx + 0.5 * head * dy, y2 - head * dy - 0.5 * head * dx)
    right = (x2 - head * dx - 0.5 * head * dy, y2 - head * dy + 0.5 * head * dx)
    return (
        f'<g class="glyph-vector">'
        f'<line x1="{_n(x1)}" y1="{_n(y1)}" x2="{_n(x2)}" y2="{_n(y2)}"/>'
        f'<path d="M {_n(x2)},{_n(y2)} L {_n(left[0])},{_n(left[1])} '
        f'L {_n(right[0])},{_n(right[1])} Z"/>'
        f"</g>")


def _bivector_svg(g: Glyph) -> str:
    rx = max(g.size, 2.0)
    ry = max(rx * max(g.ratio, 0.08), 1.0)
    # Circulation arrow: a three-quarter arc; the sweep flag encodes the
    # sense (screen y points down, so sweep 0 is counterclockwise in
    # field coordinates).
    sweep = 0 if g.sense >= 0 else 1
    sy = -ry if g.sense >= 0 else ry
    head = max(2.0, 0.35 * ry)
    tip = (0.0, sy)
    arrow = (f'<path d="M {_n(-rx)},0 A {_n(rx)} {_n(ry)} 0 0 {sweep} '
             f'{_n(tip[0])},{_n(tip[1])}" fill="none"/>'
             f'<path d="M {_n(tip[0])},{_n(tip[1])} '
             f'l {_n(head)},{_n(-0.6 * head if g.sense >= 0 else 0.6 * head)} '
             f'l 0,{_n(1.2 * head if g.sense >= 0 else -1.2 * head)} Z"/>')
    return (
        f'<g class="glyph-bivector" transform="translate({_n(g.cx)},{_n(g.cy)}) '
        f'rotate({_n(g.angle)})">'
        f'<ellipse rx="{_n(rx)}" ry="{_n(ry)}"/>'
        f"{arrow}</g>")


def _trivector_svg(g: Glyph) -> str:
    r = max(g.size, 2.0)
    return (
        f'<g class="glyph-trivector" transform="translate({_n(g.cx)},{_n(g.cy)})">'
        f'<circle r="{_n(r)}"/>'
        f'<ellipse rx="{_n(r)}" ry="{_n(0.35 * r)}"/>'
        f"</g>")


_GLYPH_SVG = {
    "scalar": _scalar_svg,
    "vector": _vector_svg,
    "bivector": _bivector_svg,
    "trivector": _trivector_svg,
}


# ---------------------------------------------------------------------------
# Scenes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SceneSpec:
    """What a scene samples and what it must draw.

    One glyph of kind ``lattice_glyph`` is drawn per lattice point, plus
    the declared focal glyphs; ``render_svg_scene`` enforces that count.
    """

    name: str
    source: str                                   # field registry name
    lattice: tuple[tuple[float, ...], ...]
    lattice_glyph: str
    focus_glyphs: tuple[str, ...]
    projection: str
    scale: float
    center: tuple[float, float] = (0.0, 0.0)
    glyph_scale: float = 40.0
    description: str = ""

    @property
    def expected_glyph_count(self) -> int:
        return len(self.lattice) + len(self.focus_glyphs)


class SceneIntegrityError(AssertionError):
    """A scene built a different set of glyphs than its spec declares."""


def _ring(n: int, radius: float, dim: int = 2, z: float = 0.0
          ) -> tuple[tuple[float, ...], ...]:
    pts = []
    for k in range(n):
        th = 2.0 * math.pi * k / n
        p = (radius * math.cos(th), radius * math.sin(th))
        pts.append(p if dim == 2 else p + (z,))
    return tuple(pts)


def _sphere_lattice() -> tuple[tuple[float, ...], ...]:
    """The 26 directions of the {-1,0,1}^3 grid, pushed onto the sphere."""
    pts = []
    for i in (-1, 0, 1):
        for j in (-1, 0, 1):
            for k in (-1, 0, 1):
                if i == j == k == 0:
                    continue
                v = np.array([i, j, k], dtype=float)
                v /= np.linalg.norm(v)
                pts.append((float(v[0]), float(v[1]), float(v[2])))
    return tuple(pts)


def _polar_rings() -> tuple[tuple[float, ...], ...]:
    pts = []
    for phi in (math.pi / 4, math.pi / 2, 3 * math.pi / 4):
        for k in range(6):
            th = 2.0 * math.pi * k / 6
            pts.append((math.sin(phi) * math.cos(th),
                        math.sin(phi) * math.sin(th),
                        math.cos(phi)))
    return tuple(pts)


@lru_cache(maxsize=1)
def builtin_scenes() -> dict[str, SceneSpec]:
    scenes = [
        SceneSpec(
            "fig3_gradient", "cubic1d",
            lattice=((0.5,), (1.0,)), lattice_glyph="scalar",
            focus_glyphs=("vector",), projection="plane", scale=260.0,
            center=(0.75, 0.0), glyph_scale=22.0,
            description="boundary values of x^3 on [0.5, 1]: dots of "
                        "unequal size with the mean-gradient arrow between"),
        SceneSpec(
            "fig4_green", "rotor2d",
            lattice=_ring(12, 1.0), lattice_glyph="vector",
            focus_glyphs=("bivector",), projection="plane", scale=140.0,
            description="circulating plane field with its curl bivector"),
        SceneSpec(
            "fig5_div2d", "radial2d",
            lattice=_ring(12, 1.0), lattice_glyph="vector",
            focus_glyphs=("scalar",), projection="plane", scale=140.0,
            description="radial plane field with its divergence source dot"),
        SceneSpec(
            "fig6_radial_spin", "radial_spin3d",
            lattice=_sphere_lattice(), lattice_glyph="bivector",
            focus_glyphs=("trivector",), projection="iso", scale=140.0,
            glyph_scale=16.0,
            description="radial spin structure: coherent tangent discs on "
                        "the sphere around the volume trivector"),
        SceneSpec(
            "fig7_toroidal", "toroidal_bivector",
            lattice=_ring(12, 2.0, dim=3), lattice_glyph="bivector",
            focus_glyphs=("vector",), projection="iso", scale=70.0,
            glyph_scale=24.0,
            description="toroidal vortex: vertical circulation discs around "
                        "the ring, with the divergence vector at the core"),
        SceneSpec(
            "fig8b_vector_potential", "rotor3d",
            lattice=_ring(8, 1.0, dim=3), lattice_glyph="vector",
            focus_glyphs=("scalar",), projection="iso", scale=140.0,
            description="vector potential circulation and its flux density"),
        SceneSpec(
            "monopole_potential", "monopole_potential",
            lattice=_polar_rings(), lattice_glyph="bivector",
            focus_glyphs=("scalar",), projection="iso", scale=140.0,
            glyph_scale=18.0,
            description="inverse-square tangent discs around a point source"),
        SceneSpec(
            "projection_front_view", "toroidal_bivector",
            lattice=_ring(12, 2.0, dim=3), lattice_glyph="vector",
            focus_glyphs=("scalar",), projection="front", scale=70.0,
            description="the toroidal ring viewed along e1: each disc "
                        "collapses to its dual arrow, reproducing the plane "
                        "divergence layout"),
    ]
    return {s.name: s for s in scenes}


def get_scene(name: str) -> SceneSpec:
    try:
        return builtin_scenes()[name]
    except KeyError:
        known = ", ".join(builtin_scenes())
        raise KeyError(f"unknown scene {name!r}; known scenes: {known}") from None


# ---------------------------------------------------------------------------
# Building glyphs from field samples
# ---------------------------------------------------------------------------

def _screen_angle(direction: np.ndarray, projection: str) -> tuple[float, float]:
    """(angle degrees, projected length) of a field vector on screen."""
    u, v = _project(direction, projection)
    # Screen y grows downward.
    return math.degrees(math.atan2(-v, u)), math.hypot(u, v)


def _vector_glyph(spec: SceneSpec, px: float, py: float,
                  value: Multivector) -> Glyph:
    direction = np.array([value.coeffs[1 << i] for i in range(value.algebra.dim)])
    norm = float(np.linalg.norm(direction))
    if norm < 1e-12:
        return Glyph("vector", px, py, 0.0)
    angle, shown = _screen_angle(direction, spec.projection)
    return Glyph("vector", px, py, spec.glyph_scale * norm * max(shown / norm, 0.1),
                 angle=angle)


def _bivector_glyph(spec: SceneSpec, px: float, py: float, value: Multivector,
                    point: np.ndarray) -> Glyph:
    alg = value.algebra
    size = spec.glyph_scale * value.norm()
    if alg.dim == 2:
        sense = 1 if value.coeffs[0b11] >= 0 else -1
        return Glyph("bivector", px, py, size, sense=sense)
    # Disc plane from the bivector: its dual vector is the disc normal.
    normal = value.dual()
    ncoeffs = np.array([normal.coeffs[1 << i] for i in range(3)])
    nnorm = float(np.linalg.norm(ncoeffs))
    if nnorm < 1e-12:
        return Glyph("bivector", px, py, size)
    nhat = ncoeffs / nnorm
    view = _VIEW_DIRECTION[spec.projection]
    ratio = abs(float(nhat @ view))
    minor_angle, shown = _screen_angle(nhat, spec.projection)
    angle = minor_angle + 90.0 if shown > 1e-9 else 0.0
    # Orientation sense: positive when the disc normal leaves the origin
    # (coherent with the outward measure on spheres about it).
    radial = np.asarray(point[:3], dtype=float)
    sense = 1 if float(nhat @ radial) >= 0.0 else -1
    return Glyph("bivector", px, py, size, angle=angle, ratio=ratio, sense=sense)


def _lattice_glyph(spec: SceneSpec, point: tuple[float, ...]) -> Glyph:
    field = get_field(spec.source)
    p = np.asarray(point, dtype=float)
    value = field(p)
    u, v = _project(p, spec.projection)
    px, py = _to_pixels(u, v, spec.scale, spec.center)
    if spec.lattice_glyph == "scalar":
        return Glyph("scalar", px, py, spec.glyph_scale * abs(value.scalar_part()))
    if spec.lattice_glyph == "vector":
        if spec.name == "projection_front_view":
            # Front view: draw the dual vector of the sampled bivector.
            value = value.dual()
        return _vector_glyph(spec, px, py, value)
    if spec.lattice_glyph == "bivector":
        return _bivector_glyph(spec, px, py, value, p)
    raise ValueError(f"no lattice builder for glyph kind {spec.lattice_glyph!r}")


def _focus_center(spec: SceneSpec) -> tuple[float, float]:
    return _to_pixels(*_project(np.zeros(3), spec.projection),
                      spec.scale, spec.center)


def _focus_glyphs(spec: SceneSpec) -> list[Glyph]:
    px, py = _focus_center(spec)
    field = get_field(spec.source)
    if spec.name == "fig3_gradient":
        (a,), (b,) = spec.lattice[0], spec.lattice[-1]
        fa = field(np.array([a])).scalar_part()
        fb = field(np.array([b])).scalar_part()
        mean_slope = (fb - fa) / (b - a)
        return [Glyph("vector", px, py, spec.glyph_scale * mean_slope, angle=0.0)]
    if spec.name == "fig4_green":
        curl = DerivativePartField(field, "curl")(np.zeros(2))
        sense = 1 if curl.coeffs[0b11] >= 0 else -1
        return [Glyph("bivector", px, py, 10.0 * curl.norm(), sense=sense)]
    if spec.name == "fig5_div2d":
        div = DerivativePartField(field, "div")(np.zeros(2))
        return [Glyph("scalar", px, py, 7.0 * abs(div.scalar_part()))]
    if spec.name == "fig6_radial_spin":
        crl = DerivativePartField(field, "curl")(np.zeros(3))
        return [Glyph("trivector", px, py, 9.0 * crl.norm())]
    if spec.name == "fig7_toroidal":
        core = np.array([2.0, 0.0, 0.0])
        div = DerivativePartField(field, "div")(core)
        u, v = _project(core, spec.projection)
        cx, cy = _to_pixels(u, v, spec.scale, spec.center)
        return [_vector_glyph(spec, cx, cy, div)]
    if spec.name == "fig8b_vector_potential":
        crl = DerivativePartField(field, "curl")(np.zeros(3))
        return [Glyph("scalar", px, py, 7.0 * crl.norm())]
    if spec.name == "monopole_potential":
        return [Glyph("scalar", px, py, 6.0)]
    if spec.name == "projection_front_view":
        return [Glyph("scalar", px, py, 5.0)]
    return []


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def build_glyphs(spec: SceneSpec) -> list[Glyph]:
    glyphs = [_lattice_glyph(spec, p) for p in spec.lattice]
    glyphs.extend(_focus_glyphs(spec))
    return glyphs


def render_svg_scene(spec: SceneSpec) -> str:
    """Render a scene to an SVG 1.1 document string."""
    glyphs = build_glyphs(spec)
    expected = [spec.lattice_glyph] * len(spec.lattice) + list(spec.focus_glyphs)
    if [g.kind for g in glyphs] != expected:
        raise SceneIntegrityError(
            f"scene {spec.name!r} built {[g.kind for g in glyphs]} but "
            f"declares {expected}")
    body = "\n".join(f"  {_GLYPH_SVG[g.kind](g)}" for g in glyphs)
    size = int(VIEW)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" viewBox="0 0 {size} {size}">\n'
        f"  <desc>{spec.name}: {spec.description}</desc>\n"
        f"{_STYLE}\n"
        f'  <rect width="{size}" height="{size}" fill="#fdfefe"/>\n'
        f"{body}\n"
        f"</svg>\n")


def render_scene(name: str) -> str:
    return render_svg_scene(get_scene(name))


def glyph_census(svg_text: str) -> dict[str, int]:
    """Count rendered glyphs per kind (used by tests and the CLI)."""
    return {kind: svg_text.count(f'class="glyph-{kind}"')
            for kind in ("scalar", "vector", "bivector", "trivector")}
