"""Structured verification reports shared by the library and the CLI.

A report is a list of per-check records plus bookkeeping; the overall
verdict is the conjunction of the records.  Serialization is versioned
and deterministic: keys are emitted in a fixed order and complex values
are split into real and imaginary parts.
"""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction
from typing import Any

SCHEMA_VERSION = 1


def jsonable(value: Any) -> Any:
    """Lossless, deterministic JSON image of a computed value."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, Fraction):
        return {"num": value.numerator, "den": value.denominator}
    if isinstance(value, str):
        return value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return str(value)


@dataclasses.dataclass(frozen=True)
class CheckRecord:
    """One verified statement: computed value against its reference."""

    name: str
    inputs: dict[str, Any]
    computed: Any
    reference: Any
    defect: float
    tolerance: float
    passed: bool

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "inputs": jsonable(self.inputs),
            "computed": jsonable(self.computed),
            "reference": jsonable(self.reference),
            "defect": self.defect,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


@dataclasses.dataclass
class VerificationReport:
    """Outcome of one suite; passes iff every check record passes."""

    suite: str
    checks: list[CheckRecord] = dataclasses.field(default_factory=list)
    warnings: list[str] = dataclasses.field(default_factory=list)
    wall_ms: float = 0.0
    budget_used: int = 0

    @property
    def passed(self) -> bool:
        return all(record.passed for record in self.checks)

    def add(
        self,
        name: str,
        inputs: dict[str, Any],
        computed: Any,
        reference: Any,
        defect: float,
        tolerance: float,
    ) -> CheckRecord:
        record = CheckRecord(
            name, inputs, computed, reference, defect, tolerance, defect <= tolerance
        )
        self.checks.append(record)
        return record

    def add_exact(self, name: str, inputs: dict[str, Any], computed: Any, reference: Any) -> CheckRecord:
        """Record an exact (zero-tolerance) comparison."""
        record = CheckRecord(
            name, inputs, computed, reference, 0.0 if computed == reference else 1.0, 0.0,
            computed == reference,
        )
        self.checks.append(record)
        return record

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "checks": [record.to_json() for record in self.checks],
            "pass": self.passed,
            "wall_ms": self.wall_ms,
        }
        if self.warnings:
            out["warnings"] = list(self.warnings)
        if self.budget_used:
            out["budget_used"] = self.budget_used
        return out

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False)
