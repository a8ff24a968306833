from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from numbers import Number
from typing import Any

from .numeric import fmt


def jsonable(obj: Any):
    """Recursively convert numbers to strings (exact rationals stay "p/q")."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Number):
        if isinstance(obj, int):
            return obj
        return fmt(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if hasattr(obj, "label"):
        return obj.label()
    return str(obj)


@dataclass
class CheckReport:
    """Outcome of one verification step.

    ``violations`` holds one dict per failing item (the witness); ``notes``
    holds non-fatal remarks such as skipped conditionings.
    """

    check: str
    passed: bool
    details: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "passed": self.passed,
            "details": jsonable(self.details),
            "violations": jsonable(self.violations),
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def summary(self) -> str:
        head = f"[{'PASS' if self.passed else 'FAIL'}] {self.check}"
        lines = [head]
        for k, v in self.details.items():
            lines.append(f"    {k}: {jsonable(v)}")
        for v in self.violations[:10]:
            lines.append(f"    violation: {jsonable(v)}")
        if len(self.violations) > 10:
            lines.append(f"    ... {len(self.violations) - 10} more")
        for n in self.notes:
            lines.append(f"    note: {n}")
        return "\n".join(lines)


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Number) and not isinstance(v, int):
        return fmt(v)
    return str(v)


def write_csv(path, columns, rows) -> None:
    """Write dict rows in column order; numbers are serialized as in ``fmt``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(r[c]) for c in columns])
