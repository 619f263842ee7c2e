"""JSON and CSV serialisation of certification reports."""
from __future__ import annotations

import csv
import io
import json
import math

FIELDS = ("statement_id", "p", "grid_or_samples", "worst_margin", "passed",
          "expected_fail", "runtime_ms")
SIG_DIGITS = 12


def round_sig(value):
    """Round floats (recursively) to 12 significant digits."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            return str(value)
        return float(f"{value:.{SIG_DIGITS}g}")
    if isinstance(value, dict):
        return {k: round_sig(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_sig(v) for v in value]
    if hasattr(value, "item"):
        return round_sig(value.item())
    return value


def report_record(report, timings: bool = False) -> dict:
    rec = {
        "statement_id": report.statement_id,
        "p": report.p,
        "grid_or_samples": report.grid_or_samples,
        "worst_margin": report.worst_margin,
        "passed": report.passed,
        "expected_fail": report.expected_fail,
        "runtime_ms": report.runtime_ms if timings else None,
        "details": report.details,
    }
    return round_sig(rec)


def to_json(reports, timings: bool = False) -> str:
    doc = {"reports": [report_record(r, timings) for r in reports]}
    return json.dumps(doc, indent=2) + "\n"


def to_csv(reports, timings: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIELDS)
    for r in reports:
        rec = report_record(r, timings)
        row = []
        for key in FIELDS:
            val = rec[key]
            if isinstance(val, dict):
                val = json.dumps(val, sort_keys=False)
            elif val is None:
                val = ""
            row.append(val)
        writer.writerow(row)
    return buf.getvalue()


def write(reports, path, fmt: str = "json", timings: bool = False) -> None:
    text = to_json(reports, timings) if fmt == "json" else to_csv(reports, timings)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
