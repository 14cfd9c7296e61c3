"""Verification and scan reports (JSON and human-readable summaries)."""

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional

from .config import REPORT_SCHEMA_VERSION

# Steps that may never be skipped for an overall pass
MANDATORY_STEPS = ("closure", "genus", "belyi_identity", "certificate", "profile_match")


class StepStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCOMPLETE = "incomplete"


@dataclass
class StepOutcome:
    name: str
    status: StepStatus
    evidence: Dict[str, object] = field(default_factory=dict)
    detail: str = ""

    def to_dict(self) -> Dict:
        out = {"step": self.name, "status": self.status.value, "evidence": self.evidence}
        if self.detail:
            out["detail"] = self.detail
        return out


def _decimal(value) -> object:
    """Evidence values go out as decimal strings (lists element-wise)."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_decimal(v) for v in value]
    if isinstance(value, dict):
        return {k: _decimal(v) for k, v in value.items()}
    return str(value)


class VerificationReport:
    """Outcome of verifying one fixture."""

    def __init__(self, fixture: str, group: str, degree: int, seed: int,
                 budget: Optional[Dict[str, str]] = None):
        self.fixture = fixture
        self.group = group
        self.degree = degree
        self.seed = seed
        self.budget = dict(budget or {})
        self.steps: List[StepOutcome] = []
        self.notes: List[str] = []

    def add(self, name: str, status: StepStatus, detail: str = "", **evidence) -> StepOutcome:
        step = StepOutcome(name, status, {k: _decimal(v) for k, v in evidence.items()}, detail)
        self.steps.append(step)
        return step

    def passed(self, name: str, detail: str = "", **evidence) -> StepOutcome:
        return self.add(name, StepStatus.PASS, detail, **evidence)

    def failed(self, name: str, detail: str = "", **evidence) -> StepOutcome:
        return self.add(name, StepStatus.FAIL, detail, **evidence)

    def skipped(self, name: str, detail: str = "", **evidence) -> StepOutcome:
        return self.add(name, StepStatus.SKIPPED, detail, **evidence)

    def check(self, name: str, ok: bool, detail: str = "", **evidence) -> StepOutcome:
        return self.add(name, StepStatus.PASS if ok else StepStatus.FAIL, detail, **evidence)

    def step(self, name: str) -> Optional[StepOutcome]:
        for s in self.steps:
            if s.name == name:
                return s
        return None

    @property
    def verdict(self) -> Verdict:
        if any(s.status == StepStatus.FAIL for s in self.steps):
            return Verdict.FAIL
        done = {s.name for s in self.steps if s.status == StepStatus.PASS}
        if any(name not in done for name in MANDATORY_STEPS):
            return Verdict.INCOMPLETE
        return Verdict.PASS

    def to_dict(self) -> Dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "kind": "verify",
            "fixture": self.fixture,
            "group": self.group,
            "degree": str(self.degree),
            "seed": str(self.seed),
            "budget": self.budget,
            "verdict": self.verdict.value,
            "steps": [s.to_dict() for s in self.steps],
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def summary(self) -> str:
        marks = {StepStatus.PASS: "ok  ", StepStatus.FAIL: "FAIL", StepStatus.SKIPPED: "skip"}
        lines = [f"{self.fixture} ({self.group}), degree {self.degree}: {self.verdict.value.upper()}"]
        for s in self.steps:
            shown = ", ".join(f"{k}={_short(v)}" for k, v in s.evidence.items())
            extra = f" ({s.detail})" if s.detail else ""
            lines.append(f"  [{marks[s.status]}] {s.name}: {shown}{extra}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        return "\n".join(lines)


def _short(value) -> str:
    if isinstance(value, list):
        return "{" + ",".join(str(v) for v in value) + "}"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {v}" for k, v in value.items()) + "}"
    return str(value)


class ScanReport:
    """Nice class triples found in one group representation."""

    def __init__(self, fixture: str, group: str, degree: int, seed: int):
        self.fixture = fixture
        self.group = group
        self.degree = degree
        self.seed = seed
        self.complete = True
        self.excluded = ""
        self.error = ""
        self.triples: List[Dict] = []
        self.ordered_count = 0
        self.group_order = 0

    @property
    def count(self) -> int:
        return len(self.triples)

    def to_dict(self) -> Dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "kind": "scan",
            "fixture": self.fixture,
            "group": self.group,
            "degree": str(self.degree),
            "group_order": str(self.group_order),
            "seed": str(self.seed),
            "complete": self.complete,
            "excluded": self.excluded,
            "error": self.error,
            "count": str(self.count),
            "ordered_count": str(self.ordered_count),
            "triples": self.triples,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def summary(self) -> str:
        if not self.complete:
            return f"{self.fixture} ({self.group}): INCOMPLETE ({self.error})"
        if self.excluded:
            return f"{self.fixture} ({self.group}): 0 nice triples ({self.excluded})"
        lines = [f"{self.fixture} ({self.group}), degree {self.degree}: "
                 f"{self.count} nice triple(s), {self.ordered_count} ordered"]
        for t in self.triples:
            lines.append(f"  {' | '.join(t['types'])}  "
                         f"(generating orbits {t['census']['generating_orbit_count']})")
        return "\n".join(lines)


def aggregate_by_group(scans: Iterable[ScanReport]) -> Dict[str, Dict[str, str]]:
    """Sum nice-triple counts over every representation of the same group."""
    out: Dict[str, Dict[str, object]] = {}
    for s in scans:
        entry = out.setdefault(s.group, {"count": 0, "ordered_count": 0,
                                         "representations": [], "complete": True})
        entry["count"] += s.count
        entry["ordered_count"] += s.ordered_count
        entry["representations"].append(s.fixture)
        entry["complete"] = entry["complete"] and s.complete
    return {g: {"count": str(e["count"]), "ordered_count": str(e["ordered_count"]),
                "representations": e["representations"], "complete": e["complete"]}
            for g, e in out.items()}
