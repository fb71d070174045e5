"""Run reports: the aligned table, the delimited form, and manifest parsing.

The delimited report uses ``repr`` for floats so a written report re-parses
to exactly the values it encodes.  Manifests are line oriented, one run per
line, whitespace-separated ``key=value`` fields; ``#`` starts a comment.
"""

from __future__ import annotations

import csv
import shlex
from dataclasses import dataclass

from .errors import ParameterError

COLUMNS = (
    "image",
    "strategy",
    "lambda_min",
    "lambda_max",
    "mu",
    "it",
    "it_gs_mean",
    "dice",
    "jaccard",
    "wall_ms",
)
# trailing column records per-row failures without disturbing the data columns
CSV_FIELDS = COLUMNS + ("error",)


@dataclass
class RunReport:
    """One benchmark row; ``error`` is set instead of results when a run fails."""

    image: str
    strategy: str
    lambda_min: float | None = None
    lambda_max: float | None = None
    mu: float | None = None
    it: int | None = None
    it_gs_mean: float | None = None
    dice: float | None = None
    jaccard: float | None = None
    wall_ms: float | None = None
    error: str | None = None


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def report_row(r: RunReport) -> dict:
    return {
        "image": r.image,
        "strategy": r.strategy,
        "lambda_min": _fmt(r.lambda_min),
        "lambda_max": _fmt(r.lambda_max),
        "mu": _fmt(r.mu),
        "it": _fmt(r.it),
        "it_gs_mean": _fmt(r.it_gs_mean),
        "dice": _fmt(r.dice),
        "jaccard": _fmt(r.jaccard),
        "wall_ms": _fmt(r.wall_ms),
        "error": r.error or "",
    }


def format_text_report(reports: list) -> str:
    """Aligned human-readable table with the same columns as the CSV."""
    rows = [report_row(r) for r in reports]
    widths = {c: len(c) for c in CSV_FIELDS}
    for row in rows:
        for c in CSV_FIELDS:
            widths[c] = max(widths[c], len(row[c]))
    header = "  ".join(c.ljust(widths[c]) for c in CSV_FIELDS)
    lines = [header, "-" * len(header)]
    for row in rows:
        lines.append("  ".join(row[c].ljust(widths[c]) for c in CSV_FIELDS))
    return "\n".join(lines) + "\n"


def write_reports(reports: list, text_path, csv_path) -> None:
    """Write the aligned table and the delimited report side by side."""
    with open(text_path, "w", encoding="ascii") as fh:
        fh.write(format_text_report(reports))
    with open(csv_path, "w", encoding="ascii", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for r in reports:
            writer.writerow(report_row(r))


def read_csv_report(csv_path) -> list:
    """Parse a delimited report back into RunReport rows."""
    reports = []
    with open(csv_path, newline="", encoding="ascii") as fh:
        for row in csv.DictReader(fh):
            reports.append(
                RunReport(
                    image=row["image"],
                    strategy=row["strategy"],
                    lambda_min=float(row["lambda_min"]) if row["lambda_min"] else None,
                    lambda_max=float(row["lambda_max"]) if row["lambda_max"] else None,
                    mu=float(row["mu"]) if row["mu"] else None,
                    it=int(row["it"]) if row["it"] else None,
                    it_gs_mean=float(row["it_gs_mean"]) if row["it_gs_mean"] else None,
                    dice=float(row["dice"]) if row["dice"] else None,
                    jaccard=float(row["jaccard"]) if row["jaccard"] else None,
                    wall_ms=float(row["wall_ms"]) if row["wall_ms"] else None,
                    error=row["error"] or None,
                )
            )
    return reports


def parse_manifest(path) -> list:
    """Parse a benchmark manifest into one dict of string fields per run."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = {}
            for token in shlex.split(line, comments=True):
                if "=" not in token:
                    raise ParameterError(
                        f"manifest line {lineno}: expected key=value, got {token!r}"
                    )
                key, value = token.split("=", 1)
                fields[key] = value
            if fields:
                fields["_line"] = str(lineno)
                rows.append(fields)
    return rows
