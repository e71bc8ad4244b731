"""Structured pass/fail records for the verification pipelines."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

SCHEMA_VERSION = 1


@dataclass
class CheckRecord:
    description: str
    lhs: float
    rhs: float
    residual: float
    passed: bool
    equality: bool | None = None  # set when an equality flag is meaningful

    def to_dict(self) -> dict:
        d = {
            "description": self.description,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "pass": self.passed,
        }
        if self.equality is not None:
            d["equality"] = self.equality
        return d


@dataclass
class VerificationReport:
    name: str
    checks: list[CheckRecord] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, description, lhs, rhs, residual, passed, equality=None) -> CheckRecord:
        rec = CheckRecord(description, float(lhs), float(rhs), float(residual),
                          bool(passed), None if equality is None else bool(equality))
        self.checks.append(rec)
        return rec

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "name": self.name,
            "overall": self.overall,
            "checks": [c.to_dict() for c in self.checks],
            "extras": self.extras,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def reports_to_json(reports: list[VerificationReport]) -> str:
    payload = {
        "schema": SCHEMA_VERSION,
        "overall": all(r.overall for r in reports),
        "reports": [r.to_dict() for r in reports],
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


CSV_COLUMNS = [
    "body_id",
    "beta",
    "perimeter",
    "area",
    "inradius",
    "lambda_ball",
    "rq",
    "lambda_fem",
    "res_volume",
    "res_inradius",
    "res_profile",
    "res_numerator",
    "res_quotient",
    "res_thm2",
    "pass_thm1",
    "pass_thm2",
]


def rows_to_csv(rows: list[dict]) -> str:
    """Fixed-column CSV for corpus tabulation; floats use repr for determinism."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        out = []
        for col in CSV_COLUMNS:
            val = row.get(col, "")
            if isinstance(val, float):
                out.append(repr(float(val)))
            else:
                out.append(str(val) if val is not None else "")
        writer.writerow(out)
    return buf.getvalue()
