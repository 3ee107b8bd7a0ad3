"""Scoring functions, elicitation of EL and VaR, and worst-case elicitation.

``elicit`` uses closed forms and can cross-check them numerically. The
worst-case version minimizes ``min_i E_{Q_i}[S(X, y)]`` over ``[min X, max X]``
on a dense grid and refines the winner by ternary search on its active branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar, Sequence

import numpy as np

from .measures import ES, evaluate
from .prob_core import Position, ScenarioMeasure, distribution, quantile


@dataclass(frozen=True)
class ScoringFunction:
    kind: ClassVar[str] = ""

    def __call__(self, x, y):
        raise NotImplementedError

    def vector(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Scores for every pair of ``x[:, None]`` and ``y[None, :]``."""
        raise NotImplementedError

    @staticmethod
    def parse(text: str) -> "ScoringFunction":
        name, _, arg = text.partition(":")
        if name in ("squared", "SquaredError"):
            return SquaredError()
        if name in ("pinball", "Pinball"):
            return Pinball(float(arg))
        raise ValueError(f"unknown scoring function {text!r}")


@dataclass(frozen=True)
class SquaredError(ScoringFunction):
    kind: ClassVar[str] = "SquaredError"

    def __call__(self, x, y):
        return (x - y) ** 2

    def vector(self, x, y):
        return (x[:, None] - y[None, :]) ** 2


@dataclass(frozen=True)
class Pinball(ScoringFunction):
    """``alpha (x - y)^+ + (1 - alpha) (x - y)^-``."""

    alpha: float
    kind: ClassVar[str] = "Pinball"

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError(f"pinball level {self.alpha!r} outside (0, 1)")

    def __call__(self, x, y):
        d = x - y
        return self.alpha * d if d > 0 else (self.alpha - 1) * d

    def vector(self, x, y):
        d = x[:, None] - y[None, :]
        return np.where(d > 0, self.alpha * d, (self.alpha - 1) * d)


def expected_score(S: ScoringFunction, X: Position, Q: ScenarioMeasure, y):
    return sum(q * S(x, y) for x, q in zip(X.values, Q.probs))


def elicit(S: ScoringFunction, X: Position, Q: ScenarioMeasure | None = None):
    """``-argmin_y E_Q[S(X, y)]`` in closed form (lowest minimizer on ties)."""
    Q = X.space.base if Q is None else Q
    if isinstance(S, SquaredError):
        return -Q.expectation(X)
    if isinstance(S, Pinball):
        return -quantile(distribution(X, Q), S.alpha)
    raise ValueError(f"no closed form for {S!r}")


def _golden(h, lo, hi, iters=200):
    """Minimizer of a unimodal ``h`` on [lo, hi]."""
    g = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - g * (b - a), a + g * (b - a)
    hc, hd = h(c), h(d)
    for _ in range(iters):
        if b - a < 1e-13 * (1 + abs(a) + abs(b)):
            break
        if hc <= hd:
            b, d, hd = d, c, hc
            c = b - g * (b - a)
            hc = h(c)
        else:
            a, c, hc = c, d, hd
            d = a + g * (b - a)
            hd = h(d)
    return (a + b) / 2


def _grid(X: Position, resolution: float | None):
    lo, hi = float(min(X.values)), float(max(X.values))
    if hi == lo:
        return np.array([lo]), 0.0
    r = resolution or (hi - lo) / 1e6
    k = int(math.ceil((hi - lo) / r))
    return np.linspace(lo, hi, k + 1), (hi - lo) / k


def _branch_scores(S, X, Q, ys):
    x = np.array([float(v) for v in X.values])
    q = np.array([float(v) for v in Q.probs])
    out = np.zeros_like(ys)
    # chunks keep memory flat on fine grids
    step = 200_000
    for s in range(0, len(ys), step):
        out[s:s + step] = q @ S.vector(x, ys[s:s + step])
    return out


TIE_TOL = 1e-13


def _leftmost_min(vals: np.ndarray) -> int:
    """First index within a relative tolerance of the minimum (flat minima go left)."""
    vmin = vals.min()
    return int(np.argmax(vals <= vmin + TIE_TOL * (1 + abs(vmin))))


def elicit_numeric(S: ScoringFunction, X: Position, Q: ScenarioMeasure | None = None,
                   resolution: float | None = None) -> float:
    """Grid search plus golden-section refinement; leftmost grid minimizer wins ties."""
    Q = X.space.base if Q is None else Q
    ys, r = _grid(X, resolution)
    vals = _branch_scores(S, X, Q, ys)
    j = _leftmost_min(vals)
    if r == 0:
        return -float(ys[j])
    h = lambda y: float(expected_score(S, X, Q, y))  # noqa: E731
    lo, hi = max(ys[0], ys[j] - r), min(ys[-1], ys[j] + r)
    y = _golden(h, lo, hi)
    # refinement stays within one grid step, so flat minima keep their left end up to r
    return -(y if h(y) < h(float(ys[j])) else float(ys[j]))


@dataclass
class WorstCaseElicitation:
    value: float
    argmin: float
    branch: int
    resolution: float
    per_scenario: list
    target: float

    @property
    def agrees(self) -> bool:
        return abs(self.value - self.target) <= 2 * self.resolution + 1e-12

    def to_dict(self):
        return {"value": self.value, "argmin": self.argmin, "branch": self.branch,
                "resolution": self.resolution, "per_scenario": self.per_scenario,
                "max_per_scenario": self.target, "agrees": self.agrees}


def worst_case_elicitation(S: ScoringFunction, X: Position, scenarios: Sequence[ScenarioMeasure],
                           resolution: float | None = None) -> WorstCaseElicitation:
    """Minimize ``min_i E_{Q_i}[S(X, y)]`` over ``y`` in ``[min X, max X]``.

    The infimum over the convex hull of the scenarios is linear in the
    probability, so the minimum over the listed vertices is used. ``target``
    is ``max_i elicit(S, X, Q_i)``, the worst case of the single-scenario
    values, reported next to the minimizer for comparison.
    """
    scenarios = list(scenarios)
    if not scenarios:
        raise ValueError("the scenario set must be non-empty")
    ys, r = _grid(X, resolution)
    branches = np.vstack([_branch_scores(S, X, Q, ys) for Q in scenarios])
    env = branches.min(axis=0)
    j = _leftmost_min(env)
    i = int(np.argmin(branches[:, j]))
    y = float(ys[j])
    if r > 0:
        Q = scenarios[i]
        h = lambda t: float(expected_score(S, X, Q, t))  # noqa: E731
        cand = _golden(h, max(ys[0], y - r), min(ys[-1], y + r))
        if h(cand) < h(y):
            y = cand
    per = [float(elicit(S, X, Q)) for Q in scenarios]
    return WorstCaseElicitation(-y, y, i, r, per, max(per))


def elicit_worst_case(S: ScoringFunction, X: Position, scenarios: Sequence[ScenarioMeasure],
                      resolution: float | None = None) -> float:
    return worst_case_elicitation(S, X, scenarios, resolution).value


def tail_scenario(X: Position, alpha) -> ScenarioMeasure:
    """Base probabilities reweighted by ``1/alpha`` on ``{X <= VaR level}``, zero elsewhere."""
    P = X.space.base
    v = quantile(distribution(X, P), alpha)
    probs = [p / alpha if x <= v else 0 * p for x, p in zip(X.values, P.probs)]
    return X.space.scenario(probs)


def has_tail_tie(X: Position, alpha, tol: float = 1e-12) -> bool:
    """True when the alpha-quantile atom straddles the level, so the tail event is not of mass alpha."""
    F = distribution(X, X.space.base)
    v = quantile(F, alpha)
    return abs(F.cdf(v) - alpha) > tol


def es_tail_check(X: Position, alpha, tol: float = 1e-8) -> dict:
    """ES as minus the mean under the tail-reweighted probability."""
    Qx = tail_scenario(X, alpha)
    lhs = evaluate(ES(alpha), X)
    rhs = elicit(SquaredError(), X, Qx)
    return {"es": lhs, "tail_mean": rhs, "passed": abs(lhs - rhs) <= tol}


__all__ = [
    "ScoringFunction", "SquaredError", "Pinball", "expected_score", "elicit",
    "elicit_numeric", "WorstCaseElicitation", "worst_case_elicitation",
    "elicit_worst_case", "tail_scenario", "has_tail_tie", "es_tail_check",
]
