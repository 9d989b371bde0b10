"""Check results shared by the library and the command line."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

EXIT_CODES = {
    "pass": 0,
    "found": 0,
    "fail": 1,
    "not-found": 1,
    "inconclusive": 2,
}
USAGE_ERROR = 3


@dataclass(frozen=True)
class Finding:
    locator: tuple
    difference: str
    note: str = ""

    def to_json(self) -> dict:
        out = {"locator": list(self.locator), "difference": self.difference}
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Report:
    command: str
    verdict: str = "pass"
    findings: list = field(default_factory=list)
    witness: str | None = None
    messages: list = field(default_factory=list)

    def __post_init__(self):
        if self.verdict not in EXIT_CODES:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    def fail(self, locator, difference, note: str = "") -> None:
        self.findings.append(Finding(tuple(locator), str(difference), note))
        self.verdict = "fail"

    def extend(self, other: Report, prefix: str = "") -> Report:
        for f in other.findings:
            self.findings.append(Finding(f.locator, f.difference, (prefix + f.note) if prefix else f.note))
        if other.verdict == "fail":
            self.verdict = "fail"
        self.messages.extend(other.messages)
        return self

    @property
    def ok(self) -> bool:
        return self.verdict in ("pass", "found")

    def __bool__(self):
        return self.ok

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def sorted_findings(self) -> list:
        return sorted(self.findings, key=lambda f: (tuple(map(str, f.locator)), f.note))

    def to_json(self) -> dict:
        out = {
            "command": self.command,
            "verdict": self.verdict,
            "findings": [f.to_json() for f in self.sorted_findings()],
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.messages:
            out["messages"] = list(self.messages)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def render(self) -> str:
        lines = [f"{self.command}: {self.verdict}"]
        lines += [f"  {m}" for m in self.messages]
        for f in self.sorted_findings():
            loc = ", ".join(map(str, f.locator))
            note = f" [{f.note}]" if f.note else ""
            lines.append(f"  at ({loc}){note}: {f.difference}")
        if self.witness is not None:
            lines.append(f"  witness: {self.witness}")
        return "\n".join(lines)

    def __str__(self):
        return self.render()


REPORT_SCHEMA = {
    "type": "object",
    "required": ["command", "verdict", "findings"],
    "properties": {
        "command": {"type": "string"},
        "verdict": {"enum": sorted(EXIT_CODES)},
        "findings": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["locator", "difference"],
                "properties": {
                    "locator": {"type": "array"},
                    "difference": {"type": "string"},
                    "note": {"type": "string"},
                },
            },
        },
        "witness": {"type": "string"},
        "messages": {"type": "array", "items": {"type": "string"}},
    },
}
