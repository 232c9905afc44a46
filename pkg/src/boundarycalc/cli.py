"""Command-line front end.

Subcommands:

* ``verify`` — run boundary-theorem cases, print the report table, and
  exit 0 only if every case meets the tolerance (1 on failure, 2 on
  unknown ids).
* ``render`` — write one registered scene as an SVG file.
* ``table``  — print the grade-dimension table (binomial rows with the
  even-grade entries marked).
* ``list``   — enumerate registered cases, fields, manifolds, scenes.

Settings resolve in the order: command-line flag, then TOML config file
(sections ``[case]``, ``[field]``, ``[quadrature]``, ``[render]``),
then the ``BOUNDARY_CALC_ORDER`` environment variable, then defaults.
The ``[field]`` section may substitute a field expression for one
case's registered field — the standard forced-failure fixture, since a
perturbed field still satisfies the boundary theorem but misses the
closed-form anchor.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Sequence

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

from .cases import builtin_cases, get_case, run_case
from .exprparse import ParseError, expr_to_field
from .fields import builtin_fields, get_field
from .manifolds import MANIFOLD_BUILDERS
from .quadrature import QuadratureRule
from .render import builtin_scenes, get_scene, render_svg_scene
from .report import emit_report, format_text_table

DEFAULT_ORDER = 8
DEFAULT_TOLERANCE = 1e-6
ORDER_ENV_VAR = "BOUNDARY_CALC_ORDER"

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_UNKNOWN = 2


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def _resolve_order(args, config: dict) -> int:
    if args.order is not None:
        return args.order
    quad = config.get("quadrature", {})
    if "order" in quad:
        return int(quad["order"])
    env = os.environ.get(ORDER_ENV_VAR)
    if env is not None:
        return int(env)
    return DEFAULT_ORDER


def _resolve_tolerance(args, config: dict) -> float:
    if args.tolerance is not None:
        return args.tolerance
    return float(config.get("case", {}).get("tolerance", DEFAULT_TOLERANCE))


def _resolve_case_ids(args, config: dict) -> list[str]:
    if args.case:
        return list(args.case)
    ids = config.get("case", {}).get("ids")
    return list(ids) if ids else list(builtin_cases())


def _field_override(config: dict):
    section = config.get("field", {})
    if not section:
        return None, None
    case_id = section.get("override_case")
    expr = section.get("expr")
    if not case_id or not expr:
        raise ValueError("[field] needs both 'override_case' and 'expr'")
    algebra = get_field(get_case(case_id).field).algebra
    return case_id, expr_to_field(expr, algebra=algebra)


def _cmd_verify(args) -> int:
    config = _load_config(args.config)
    order = _resolve_order(args, config)
    tolerance = _resolve_tolerance(args, config)
    case_ids = _resolve_case_ids(args, config)
    override_id, override_field = _field_override(config)

    rule = QuadratureRule(order)
    reports = []
    for cid in case_ids:
        spec = get_case(cid)
        substitute = override_field if cid == override_id else None
        reports.append(run_case(spec, rule, field=substitute))

    print(format_text_table(reports, tolerance), end="")
    failed = [r.case_id for r in reports if not r.passes(tolerance)]
    print(f"{len(reports) - len(failed)}/{len(reports)} cases within "
          f"tolerance {tolerance:g} at order {order}")
    if args.json:
        emit_report(reports, "json", args.json)
        print(f"wrote {args.json}")
    if args.csv:
        emit_report(reports, "csv", args.csv)
        print(f"wrote {args.csv}")
    if failed:
        print(f"FAILED: {', '.join(failed)}", file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


def _cmd_render(args) -> int:
    config = _load_config(args.config).get("render", {})
    scene_name = args.scene or config.get("scene")
    out = args.out or config.get("out")
    if not scene_name or not out:
        print("render needs --scene and --out (or a [render] config section)",
              file=sys.stderr)
        return EXIT_UNKNOWN
    svg = render_svg_scene(get_scene(scene_name))
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_table(_args) -> int:
    print("grade dimensions of G_n (even-grade entries in brackets)")
    for n in range(5):
        row = [math.comb(n, k) for k in range(n + 1)]
        cells = " ".join(
            f"[{c}]" if k % 2 == 0 else str(c) for k, c in enumerate(row))
        even = sum(c for k, c in enumerate(row) if k % 2 == 0)
        print(f"G_{n}: {cells:24s} total {2**n:3d}  even part {even}")
    return EXIT_OK


def _cmd_list(_args) -> int:
    print("cases:")
    for cid, spec in builtin_cases().items():
        print(f"  {cid}  {spec.title} ({spec.manifold}, {spec.field})")
    print("fields:")
    for name, field in sorted(builtin_fields().items()):
        grades = ",".join(str(g) for g in sorted(field.codomain_grades))
        print(f"  {name}  (G_{field.algebra.dim}, grades {grades})")
    print("manifolds:")
    for name in sorted(MANIFOLD_BUILDERS):
        print(f"  {name}")
    print("scenes:")
    for name, scene in builtin_scenes().items():
        print(f"  {name}  ({scene.expected_glyph_count} glyphs)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boundarycalc",
        description="verify boundary-theorem cases and render field scenes")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run cases and report both sides")
    verify.add_argument("--case", action="append", metavar="ID",
                        help="case id (repeatable; default: all)")
    verify.add_argument("--order", type=int, help="Gauss-Legendre order per axis")
    verify.add_argument("--tolerance", type=float,
                        help=f"relative tolerance (default {DEFAULT_TOLERANCE:g})")
    verify.add_argument("--config", help="TOML config file")
    verify.add_argument("--json", metavar="PATH", help="also write a JSON report")
    verify.add_argument("--csv", metavar="PATH", help="also write a CSV report")
    verify.set_defaults(func=_cmd_verify)

    render = sub.add_parser("render", help="write a scene as SVG")
    render.add_argument("--scene", help="scene name (see 'list')")
    render.add_argument("--out", metavar="FILE.svg", help="output path")
    render.add_argument("--config", help="TOML config file")
    render.set_defaults(func=_cmd_render)

    table = sub.add_parser("table", help="grade-dimension table")
    table.set_defaults(func=_cmd_table)

    lst = sub.add_parser("list", help="registered cases, fields, manifolds, scenes")
    lst.set_defaults(func=_cmd_list)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (KeyError, ParseError, ValueError, OSError) as exc:
        message = exc.args[0] if exc.args else str(exc)
        print(f"error: {message}", file=sys.stderr)
        return EXIT_UNKNOWN


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
