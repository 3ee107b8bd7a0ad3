"""Small result containers shared by the checkers and the CLI."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def plain(obj: Any) -> Any:
    """Convert fractions, tuples and dataclass reports into JSON-ready values."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return float(obj)
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, int):
        return obj
    if hasattr(obj, "to_dict"):
        return plain(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    try:
        return float(obj)
    except (TypeError, ValueError):
        return str(obj)


@dataclass
class CheckReport:
    """Outcome of a falsification or equality check.

    ``passed`` means no counterexample was found; ``witness`` carries the
    inputs reproducing a failure.
    """

    name: str
    passed: bool
    trials: int = 0
    witness: dict | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "trials": self.trials,
            "witness": plain(self.witness),
            "details": plain(self.details),
        }

    def __bool__(self):
        return self.passed
