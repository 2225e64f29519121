"""Pass/fail reports shared by the checkers and the command line."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field


@dataclass
class Violation:
    relation: str
    location: tuple
    detail: str = ""

    def line(self):
        loc = ";".join(str(x) for x in self.location)
        return f"{self.relation} ({loc}) {self.detail}".rstrip()


@dataclass
class Report:
    suite: str
    violations: list = field(default_factory=list)
    checked: int = 0
    sampled: int = 0
    notes: list = field(default_factory=list)
    seconds: float = 0.0
    error: str = ""

    @property
    def status(self):
        if self.error:
            return "error"
        return "fail" if self.violations else "pass"

    @property
    def passed(self):
        return self.status == "pass"

    def add(self, relation, location, detail=""):
        self.violations.append(Violation(relation, tuple(location), detail))

    def record(self, cmp, relation, location):
        """Fold a ``Comparison`` into the report."""
        self.checked += 1
        if getattr(cmp, "sampled", False):
            self.sampled += 1
        if not cmp.equal:
            detail = f"input {cmp.witness}: {cmp.lhs} != {cmp.rhs}" if cmp.witness is not None else ""
            self.add(relation, location, detail)
        return cmp.equal

    def merge(self, other: "Report", prefix=""):
        for v in other.violations:
            self.violations.append(Violation(prefix + v.relation, v.location, v.detail))
        self.checked += other.checked
        self.sampled += other.sampled
        self.notes.extend(other.notes)
        if other.error and not self.error:
            self.error = other.error
        return self

    def lines(self):
        out = [v.line() for v in self.violations]
        extra = f", {self.sampled} sampled" if self.sampled else ""
        out.append(f"{self.status.upper()} {self.suite}: {self.checked} relations checked{extra}")
        return out

    def to_json(self, timing=False):
        d = {
            "suite": self.suite,
            "status": self.status,
            "violations": [{"relation": v.relation, "location": [str(x) for x in v.location], "detail": v.detail}
                           for v in self.violations],
            "checked": self.checked,
            "sampled": self.sampled,
            "notes": self.notes,
            "error": self.error,
        }
        if timing:
            d["seconds"] = round(self.seconds, 3)
        return d

    def dumps(self, timing=False):
        return json.dumps(self.to_json(timing), sort_keys=True)


class timed:
    def __init__(self, report: Report):
        self.report = report

    def __enter__(self):
        self.t = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.seconds += time.perf_counter() - self.t
        return False
