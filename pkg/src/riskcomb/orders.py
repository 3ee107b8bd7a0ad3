"""First and second order stochastic dominance under one or several scenarios."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .prob_core import (
    FiniteProbSpace,
    Position,
    ScenarioMeasure,
    distribution,
    integrated_quantile,
    is_exact,
    quantile,
)
from .reporting import CheckReport

ORDER_TOL = 1e-12


@dataclass(frozen=True)
class OrderKind:
    degree: int
    scope: str = "single"  # "single" or "set"

    def __post_init__(self):
        if self.degree not in (1, 2):
            raise ValueError(f"degree must be 1 or 2, got {self.degree!r}")
        if self.scope not in ("single", "set"):
            raise ValueError(f"scope must be 'single' or 'set', got {self.scope!r}")

    @classmethod
    def parse(cls, text: str) -> "OrderKind":
        """``"2"`` or ``"2:set"``."""
        deg, _, scope = text.partition(":")
        return cls(int(deg), scope or "single")


@dataclass(frozen=True)
class Dominance:
    holds: bool
    level: object = None  # first level where the comparison fails
    scenario: int | None = None

    def __bool__(self):
        return self.holds

    def to_dict(self):
        return {"holds": self.holds, "level": self.level, "scenario": self.scenario}


def _scenarios(scenarios) -> list:
    if isinstance(scenarios, ScenarioMeasure):
        return [scenarios]
    scenarios = list(scenarios)
    if not scenarios:
        raise ValueError("the scenario set must be non-empty")
    return scenarios


def _one(X: Position, Y: Position, Q: ScenarioMeasure, degree: int):
    FX, FY = distribution(X, Q), distribution(Y, Q)
    exact = all(is_exact(v) for v in (*X.values, *Y.values, *Q.probs))
    tol = 0 if exact else ORDER_TOL
    levels = []
    for a in sorted(set(FX.cumulative) | set(FY.cumulative)):
        # float cumulative sums of the two laws can disagree in the last bit
        if not levels or a - levels[-1] > tol:
            levels.append(a)
        else:
            levels[-1] = max(levels[-1], a)
    prev = 0
    for a in levels:
        if degree == 1:
            # quantiles are constant between breakpoints; the midpoint avoids rounding at the ends
            mid = (prev + a) / 2
            prev = a
            lhs, rhs = quantile(FX, mid), quantile(FY, mid)
        else:
            lhs, rhs = integrated_quantile(FX, a), integrated_quantile(FY, a)
        if lhs < rhs - tol * (1 + abs(rhs)):
            return a
    return None


def dominates(X: Position, Y: Position, kind: OrderKind, scenarios) -> Dominance:
    """Whether ``X`` dominates ``Y``; the quantile envelopes are compared at every breakpoint."""
    scenarios = _scenarios(scenarios)
    if kind.scope == "single" and len(scenarios) != 1:
        raise ValueError("single-scenario dominance takes exactly one scenario")
    for i, Q in enumerate(scenarios):
        bad = _one(X, Y, Q, kind.degree)
        if bad is not None:
            return Dominance(False, bad, i)
    return Dominance(True)


def dominated_pair(rng: random.Random, space: FiniteProbSpace, scenarios, degree: int):
    """Random ``(X, Y)`` with ``X`` dominating ``Y`` under every scenario by construction.

    Degree 1 adds a nonnegative shift. Degree 2 adds a shift that is
    nonincreasing in the rank of ``Y`` and never reorders outcomes, offset so
    that its mean is nonnegative under every scenario; its partial tail sums
    are then nonnegative, which is second order dominance.
    """
    scenarios = _scenarios(scenarios)
    n = space.n
    y = [rng.choice([round(rng.uniform(-10, 10), 1), rng.uniform(-10, 10)]) for _ in range(n)]
    if degree == 1:
        shift = [rng.choice([0.0, rng.uniform(0, 3)]) for _ in range(n)]
        return space.position([a + b for a, b in zip(y, shift)]), space.position(y)
    order = sorted(range(n), key=lambda k: (y[k], k))
    delta = [0.0] * n
    level = 0.0
    for r, k in enumerate(order):
        if r:
            gap = y[k] - y[order[r - 1]]
            level -= gap * rng.choice([0.0, 1.0, rng.random()])
        delta[k] = level
    lift = max(-sum(q * d for q, d in zip(Q.probs, delta)) for Q in scenarios)
    lift += rng.choice([0.0, 0.0, rng.uniform(0, 1)])
    x = [a + d + lift for a, d in zip(y, delta)]
    return space.position(x), space.position(y)


def respects_order(rho, kind: OrderKind, scenarios, seed: int = 0, trials: int = 10_000,
                   space: FiniteProbSpace | None = None, tol: float = 1e-9) -> CheckReport:
    """Search for a dominated pair with ``rho(X) > rho(Y)``."""
    scenarios = _scenarios(scenarios)
    space = space or scenarios[0].space
    rng = random.Random(seed)
    name = f"respects:{kind.degree}:{kind.scope}"
    checked = 0
    for t in range(trials):
        X, Y = dominated_pair(rng, space, scenarios, kind.degree)
        if not dominates(X, Y, kind, scenarios):
            # construction is exact up to rounding; skip pairs that lose it
            continue
        checked += 1
        a, b = rho(X), rho(Y)
        if a > b + tol * (1 + abs(a) + abs(b)):
            return CheckReport(name, False, t + 1, {
                "X": list(X.values), "Y": list(Y.values), "rho(X)": a, "rho(Y)": b})
    return CheckReport(name, True, trials, details={"dominated_pairs": checked})


__all__ = ["OrderKind", "Dominance", "dominates", "dominated_pair", "respects_order"]
