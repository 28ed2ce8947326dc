"""Verification report records and their JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class EntryCheck:
    p: int
    q: int
    expected: int
    got: int
    certified: bool

    @property
    def ok(self) -> bool:
        return self.expected == self.got

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "expected": self.expected, "got": self.got,
                "certified": self.certified}


@dataclass(frozen=True)
class AuditResult:
    name: str
    passed: bool
    checked: int = 0
    failures: tuple = ()

    def to_json(self) -> dict:
        return {"name": self.name, "pass": self.passed, "checked": self.checked,
                "failures": list(self.failures)}


@dataclass(frozen=True)
class VerificationReport:
    m: int
    entries: tuple = ()
    audits: tuple = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.entries) and all(a.passed for a in self.audits)

    @property
    def failing_entries(self) -> list:
        return [e for e in self.entries if not e.ok]

    @property
    def all_certified(self) -> bool:
        return all(e.certified for e in self.entries)

    def with_audits(self, audits) -> "VerificationReport":
        return VerificationReport(self.m, self.entries, tuple(audits))

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "m": self.m,
            "entries": [e.to_json() for e in self.entries],
            "audits": [a.to_json() for a in self.audits],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    def summary(self) -> str:
        lines = [f"{'PASS' if self.passed else 'FAIL'} (m={self.m})"]
        for e in self.entries:
            flag = "ok" if e.ok else "MISMATCH"
            cert = "certified" if e.certified else "model-dependent"
            lines.append(f"  h^{{{e.p},{e.q}}}: expected {e.expected} got {e.got}  {flag}, {cert}")
        for a in self.audits:
            lines.append(f"  audit {a.name}: {'pass' if a.passed else 'FAIL'} ({a.checked} checks)")
            for msg in a.failures[:10]:
                lines.append(f"    {msg}")
        return "\n".join(lines)
