"""Shared check-report structures serialized by the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    """One verified statement: identifier, verdict, reproducible detail."""

    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def all_passed(results: list[CheckResult]) -> bool:
    return all(r.passed for r in results)
