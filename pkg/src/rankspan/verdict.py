"""Check outcomes, budgets and the errors shared by every module."""

from __future__ import annotations

import enum
import json
import os
from dataclasses import dataclass, field

DEFAULT_BUDGET = 1 << 24
BUDGET_ENV = "RANKSPAN_BUDGET"


def default_budget() -> int:
    """Enumeration budget, overridable through ``RANKSPAN_BUDGET``."""
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{BUDGET_ENV} must be positive")
    return value


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int, what: str = "elements"):
        super().__init__(f"enumeration needs {required} {what}, budget is {budget}")
        self.required = required
        self.budget = budget


class NoZeroRowIndex(RuntimeError):
    """Every R_i(V) is nonzero: either the input is not zero-spectrum or a counterexample."""


class TriangularizationNotFound(RuntimeError):
    """No permutation makes P V P^{-1} meet the lower triangular space trivially."""


class Status(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    VACUOUS = "VACUOUS"
    EXCEPTION_REGIME = "EXCEPTION_REGIME"
    HYPOTHESIS_NOT_MET = "HYPOTHESIS_NOT_MET"
    BUDGET_EXCEEDED = "BUDGET_EXCEEDED"


@dataclass
class Verdict:
    suite: str
    status: Status
    params: dict = field(default_factory=dict)
    seed: int | None = None
    counts: dict = field(default_factory=dict)
    witness: dict = field(default_factory=dict)
    elapsed_ms: int = 0

    @property
    def ok(self) -> bool:
        """True for the outcomes a run should treat as success."""
        return self.status in (Status.PASS, Status.EXCEPTION_REGIME, Status.VACUOUS)

    def to_dict(self, timing: bool = True) -> dict:
        from . import __version__

        return {
            "suite": self.suite,
            "status": self.status.value,
            "params": self.params,
            "seed": self.seed,
            "counts": self.counts,
            "witness": self.witness,
            "elapsed_ms": int(self.elapsed_ms) if timing else 0,
            "version": __version__,
        }

    def to_json(self, timing: bool = True, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=indent)

    @classmethod
    def from_dict(cls, d: dict) -> Verdict:
        return cls(
            suite=d["suite"],
            status=Status(d["status"]),
            params=d.get("params", {}),
            seed=d.get("seed"),
            counts=d.get("counts", {}),
            witness=d.get("witness", {}),
            elapsed_ms=d.get("elapsed_ms", 0),
        )
