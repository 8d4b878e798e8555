"""Validation reports returned by every checker in the library.

Checkers never raise on a failed property; they collect counterexample
witnesses so a caller (or the CLI) can show the falsifying evidence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

MAX_WITNESSES = 20


def _plain(value):
    """Convert numpy scalars/arrays into JSON-friendly Python values."""
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, float):
        if value != value:
            return "nan"
        if value in (float("inf"), float("-inf")):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


@dataclass
class ValidationReport:
    name: str
    checked: int = 0
    violations: list[dict[str, Any]] = field(default_factory=list)
    n_violations: int = 0
    metrics: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    skipped: bool = False

    @property
    def passed(self) -> bool:
        return self.n_violations == 0

    def add_violation(self, **witness) -> None:
        self.n_violations += 1
        if len(self.violations) < MAX_WITNESSES:
            self.violations.append(witness)

    def merge(self, other: "ValidationReport") -> "ValidationReport":
        """Combine two reports on the same property (associative)."""
        out = ValidationReport(
            name=self.name,
            checked=self.checked + other.checked,
            violations=(self.violations + other.violations)[:MAX_WITNESSES],
            n_violations=self.n_violations + other.n_violations,
            metrics={**self.metrics, **other.metrics},
            notes=self.notes + other.notes,
            skipped=self.skipped and other.skipped,
        )
        return out

    def to_dict(self) -> dict[str, Any]:
        return _plain(
            {
                "name": self.name,
                "passed": self.passed,
                "skipped": self.skipped,
                "checked": self.checked,
                "n_violations": self.n_violations,
                "violations": self.violations,
                "metrics": self.metrics,
                "notes": self.notes,
            }
        )

    def summary(self) -> str:
        status = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        return f"[{status}] {self.name}: {self.checked} checked, {self.n_violations} violations"
