"""Verification reports: ordered sections of pass/fail checks."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    id: str
    passed: bool
    message: str
    payload: str = ""

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"


@dataclass
class Section:
    name: str
    title: str
    checks: list[Check] = field(default_factory=list)

    def add(self, id: str, passed: bool, message: str, payload: str = "") -> Check:
        c = Check(f"{self.name}.{id}", bool(passed), message, payload)
        self.checks.append(c)
        return c

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)


@dataclass
class Report:
    sections: list[Section] = field(default_factory=list)
    conclusion: str | None = None

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.sections)

    def section(self, name: str) -> Section:
        for s in self.sections:
            if s.name == name:
                return s
        raise KeyError(name)

    def checks(self) -> list[Check]:
        return [c for s in self.sections for c in s.checks]

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks() if not c.passed), None)

    def to_text(self) -> str:
        lines = []
        for s in self.sections:
            lines.append(f"[{s.name}] {s.title}: {'PASS' if s.passed else 'FAIL'}")
            for c in s.checks:
                lines.append(f"  {c.status}  {c.message}")
        lines.append(f"OVERALL: {'PASS' if self.passed else 'FAIL'}")
        bad = self.first_failure()
        if bad is not None:
            lines.append(f"FIRST FAILURE: {bad.id}: {bad.message}")
        if self.conclusion:
            lines.append(self.conclusion)
        return "\n".join(lines) + "\n"

    def to_machine(self) -> str:
        lines = [f"{c.id}\t{c.status}\t{c.payload}" for c in self.checks()]
        lines.append(f"overall\t{'PASS' if self.passed else 'FAIL'}\t")
        return "\n".join(lines) + "\n"
