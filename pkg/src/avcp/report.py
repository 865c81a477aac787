"""JSON and CSV reports."""
from __future__ import annotations

import csv
import io
import json
from datetime import datetime, timezone

from . import __version__
from .checks import CheckRecord

REPORT_VERSION = "1.0"


def build_report(records: list[CheckRecord], *, seed: int, config: dict | None = None,
                 mc: list[dict] | None = None, notes: list[str] | None = None) -> dict:
    return {
        "report_version": REPORT_VERSION,
        "config": config,
        "checks": [r.as_dict() for r in records],
        "mc": mc or [],
        "notes": notes or [],
        "summary": {"total": len(records), "failed": sum(not r.passed for r in records),
                    "passed": all(r.passed for r in records)},
        "environment": {"seed": seed, "version": __version__,
                        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds")},
    }


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False, allow_nan=True) + "\n"


CSV_FIELDS = ["group", "name", "passed", "abs_err", "tol", "lhs", "rhs", "notes"]


def to_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in report["checks"]:
        row = {k: r.get(k, "") for k in CSV_FIELDS}
        for k in ("lhs", "rhs"):
            if isinstance(row[k], (list, dict)):
                row[k] = json.dumps(row[k])
        w.writerow(row)
    return buf.getvalue()


def summary_table(records: list[CheckRecord], width: int = 72) -> str:
    lines = []
    for r in records:
        name = f"[{r.group}] {r.name}" if r.group else r.name
        if len(name) > width:
            name = name[: width - 3] + "..."
        lines.append(f"{'PASS' if r.passed else 'FAIL'}  {name:<{width}}  err={r.abs_err:.3e}  tol={r.tol:.1e}")
    failed = sum(not r.passed for r in records)
    lines.append(f"{len(records) - failed}/{len(records)} checks passed")
    return "\n".join(lines)
