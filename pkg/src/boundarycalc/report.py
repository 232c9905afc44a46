"""Serialize case reports to JSON, CSV, or a plain-text table.

All three formats use a fixed field order and print floating-point
values with 12 significant digits, so repeated runs produce identical
artifacts.  The CSV schema is one row per case under the header
``case,grade,abs_err,rel_err,order,slope``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, Sequence

from .cases import CaseReport

CSV_HEADER = ["case", "grade", "abs_err", "rel_err", "order", "slope"]


def sig12(value: float) -> float:
    """Round to 12 significant digits (the report precision)."""
    return float(f"{value:.12g}")


def _fmt(value: float | None) -> str:
    if value is None:
        return "none"
    if math.isinf(value):
        return "inf"
    return f"{value:.12g}"


def report_to_dict(report: CaseReport) -> dict:
    """JSON-ready mapping with a stable key order."""
    return {
        "case": report.case_id,
        "order": report.order,
        "lhs": [sig12(c) for c in report.lhs.coeffs],
        "rhs": [sig12(c) for c in report.rhs.coeffs],
        "abs_err": sig12(report.abs_err),
        "rel_err": sig12(report.rel_err),
        "anchor_rel_err": None if report.anchor_rel_err is None
        else sig12(report.anchor_rel_err),
        "slope": None if math.isinf(report.slope) else sig12(report.slope),
        "at_floor": report.at_floor,
        "grades": sorted(report.result_grades),
    }


def reports_to_json(reports: Iterable[CaseReport]) -> str:
    return json.dumps({"cases": [report_to_dict(r) for r in reports]}, indent=2)


def reports_to_csv(reports: Iterable[CaseReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in reports:
        grade = ";".join(str(g) for g in sorted(r.result_grades))
        writer.writerow([r.case_id, grade, f"{r.abs_err:.12g}",
                         f"{r.rel_err:.12g}", r.order, _fmt(r.slope)])
    return buf.getvalue()


def format_text_table(reports: Sequence[CaseReport],
                      tolerance: float | None = None) -> str:
    """Aligned table; with a tolerance each row gets a pass/FAIL verdict."""
    headers = ["case", "lhs", "rhs", "rel_err", "order", "slope"]
    if tolerance is not None:
        headers.append("status")
    rows = []
    for r in reports:
        row = [r.case_id, str(r.lhs), str(r.rhs), f"{r.rel_err:.3e}",
               str(r.order), "floor" if r.at_floor else f"{r.slope:.2f}"]
        if tolerance is not None:
            row.append("pass" if r.passes(tolerance) else "FAIL")
        rows.append(row)
    widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def emit_report(reports: Sequence[CaseReport], format: str = "text",
                path: str | None = None, tolerance: float | None = None) -> str:
    """Render reports in one of {json, csv, text}; optionally write a file."""
    if format == "json":
        text = reports_to_json(reports)
    elif format == "csv":
        text = reports_to_csv(reports)
    elif format == "text":
        text = format_text_table(reports, tolerance)
    else:
        raise ValueError(f"unknown report format {format!r}; "
                         "expected json, csv, or text")
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
