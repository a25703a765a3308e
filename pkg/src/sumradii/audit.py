"""Audit trail of exact inequality checks accumulated during a solve.

Every theorem-backed inequality the pipeline relies on is recorded here
with its exact rational operands and a pass flag, so a run can be replayed
or disputed from the serialized record alone.  Checks never abort the
pipeline; callers decide what a failed check means (tests require all of
them to pass).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .rational import format_rat, rat

_OPS = {
    "<=": lambda a, b: a <= b,
    "<": lambda a, b: a < b,
    "==": lambda a, b: a == b,
    ">=": lambda a, b: a >= b,
    ">": lambda a, b: a > b,
}


@dataclass
class Check:
    name: str
    ok: bool
    lhs: str
    op: str
    rhs: str
    note: str = ""


@dataclass
class Audit:
    checks: list = field(default_factory=list)

    def compare(self, name, lhs, op, rhs, note="") -> bool:
        """Record an exact rational comparison; returns whether it holds."""
        a, b = rat(lhs), rat(rhs)
        ok = _OPS[op](a, b)
        self.checks.append(Check(name, ok, format_rat(a), op, format_rat(b), note))
        return ok

    def require(self, name, ok, note="") -> bool:
        """Record a structural fact (set property, flag) as a check."""
        ok = bool(ok)
        self.checks.append(Check(name, ok, "true" if ok else "false", "==", "true", note))
        return ok

    def extend(self, other: "Audit"):
        self.checks.extend(other.checks)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failed(self) -> list:
        return [c for c in self.checks if not c.ok]

    def names(self) -> set:
        return {c.name for c in self.checks}

    def count(self, prefix: str) -> int:
        return sum(1 for c in self.checks if c.name.startswith(prefix))

    def to_json(self) -> dict:
        return {
            "pass": self.ok,
            "checks": [
                {
                    "name": c.name,
                    "ok": c.ok,
                    "lhs": c.lhs,
                    "op": c.op,
                    "rhs": c.rhs,
                    "note": c.note,
                }
                for c in self.checks
            ],
        }
