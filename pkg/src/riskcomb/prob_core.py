"""Finite probability spaces, positions, scenario measures and quantiles.

Numbers are kept in whatever type the caller supplies. Floats are checked
against a 1e-12 normalization tolerance; ``fractions.Fraction`` inputs are
checked exactly and every downstream computation stays exact.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Hashable, Sequence

PROB_TOL = 1e-12


class DimensionError(ValueError):
    """Vectors that should share an outcome list do not."""


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _check_probs(probs: Sequence[Real], what: str) -> None:
    if not probs:
        raise ValueError(f"{what}: at least one outcome is required")
    for p in probs:
        if not math.isfinite(p):
            raise ValueError(f"{what}: non-finite mass {p!r}")
        if p < 0:
            raise ValueError(f"{what}: negative mass {p!r}")
    total = sum(probs)
    if all(is_exact(p) for p in probs):
        if total != 1:
            raise ValueError(f"{what}: masses sum to {total}, not 1")
    elif abs(total - 1) > PROB_TOL:
        raise ValueError(f"{what}: masses sum to {float(total)!r}, not 1")


@dataclass(frozen=True)
class FiniteProbSpace:
    outcome_ids: tuple
    base_probs: tuple

    def __post_init__(self):
        object.__setattr__(self, "outcome_ids", tuple(self.outcome_ids))
        object.__setattr__(self, "base_probs", tuple(self.base_probs))
        if len(self.outcome_ids) != len(self.base_probs):
            raise DimensionError("outcome_ids and base_probs differ in length")
        if len(set(self.outcome_ids)) != len(self.outcome_ids):
            raise ValueError("outcome_ids must be unique")
        _check_probs(self.base_probs, "base_probs")

    @classmethod
    def uniform(cls, n: int, exact: bool = False) -> "FiniteProbSpace":
        p = Fraction(1, n) if exact else 1.0 / n
        return cls(tuple(range(n)), (p,) * n)

    @classmethod
    def from_probs(cls, probs: Sequence[Real], ids: Sequence[Hashable] | None = None):
        ids = tuple(range(len(probs))) if ids is None else tuple(ids)
        return cls(ids, tuple(probs))

    @property
    def n(self) -> int:
        return len(self.base_probs)

    @property
    def exact(self) -> bool:
        return all(is_exact(p) for p in self.base_probs)

    @property
    def base(self) -> "ScenarioMeasure":
        return ScenarioMeasure(self.base_probs, self)

    def scenario(self, probs: Sequence[Real]) -> "ScenarioMeasure":
        return ScenarioMeasure(tuple(probs), self)

    def position(self, values: Sequence[Real]) -> "Position":
        return Position(tuple(values), self)

    def is_uniform(self) -> bool:
        return all(p == self.base_probs[0] for p in self.base_probs)


@dataclass(frozen=True)
class Position:
    """Payoff per outcome; positive values are gains."""

    values: tuple
    space: FiniteProbSpace

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != self.space.n:
            raise DimensionError(
                f"position has {len(self.values)} entries, space has {self.space.n}"
            )
        for v in self.values:
            if not math.isfinite(v):
                raise ValueError(f"position entry {v!r} is not finite")

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, k):
        return self.values[k]

    def __add__(self, other):
        if isinstance(other, Position):
            _same_space(self.space, other.space)
            return Position(tuple(a + b for a, b in zip(self.values, other.values)), self.space)
        return Position(tuple(a + other for a in self.values), self.space)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Position):
            return self + (-other)
        return self + (-other)

    def __neg__(self):
        return Position(tuple(-a for a in self.values), self.space)

    def __mul__(self, c):
        return Position(tuple(c * a for a in self.values), self.space)

    __rmul__ = __mul__

    def sup_distance(self, other: "Position"):
        _same_space(self.space, other.space)
        return max(abs(a - b) for a, b in zip(self.values, other.values))


@dataclass(frozen=True)
class ScenarioMeasure:
    """Alternative probability vector on the outcomes of ``space``."""

    probs: tuple
    space: FiniteProbSpace

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(self.probs))
        if len(self.probs) != self.space.n:
            raise DimensionError(
                f"scenario has {len(self.probs)} masses, space has {self.space.n}"
            )
        _check_probs(self.probs, "scenario")
        for q, p in zip(self.probs, self.space.base_probs):
            if p == 0 and q != 0:
                raise ValueError("scenario is not absolutely continuous w.r.t. base_probs")

    def __len__(self):
        return len(self.probs)

    def density(self) -> tuple:
        """Radon-Nikodym derivative against the base probabilities (0 on null atoms)."""
        return tuple(
            (q / p if p != 0 else 0 * q) for q, p in zip(self.probs, self.space.base_probs)
        )

    def expectation(self, X: Position):
        _same_space(self.space, X.space)
        return sum(q * x for q, x in zip(self.probs, X.values))


def _same_space(a: FiniteProbSpace, b: FiniteProbSpace) -> None:
    if a is not b and (a.n != b.n or a != b):
        raise DimensionError("objects live on different probability spaces")


def mix_scenarios(scenarios: Sequence[ScenarioMeasure], weights: Sequence[Real]) -> ScenarioMeasure:
    """The probability ``sum_i w_i Q_i``."""
    if len(scenarios) != len(weights):
        raise DimensionError("one weight per scenario is required")
    space = scenarios[0].space
    probs = [0 * scenarios[0].probs[0]] * space.n
    for Q, w in zip(scenarios, weights):
        _same_space(space, Q.space)
        probs = [a + w * q for a, q in zip(probs, Q.probs)]
    return ScenarioMeasure(tuple(probs), space)


@dataclass(frozen=True)
class Distribution:
    """Law of a position under a scenario: sorted ``(value, F(value))`` pairs."""

    atoms: tuple

    @property
    def values(self) -> list:
        return [v for v, _ in self.atoms]

    @property
    def cumulative(self) -> list:
        return [c for _, c in self.atoms]

    def cdf(self, x):
        i = bisect.bisect_right(self.values, x)
        return 0 if i == 0 else self.atoms[i - 1][1]

    def masses(self) -> list:
        out, prev = [], 0
        for v, c in self.atoms:
            out.append((v, c - prev))
            prev = c
        return out

    def quantile(self, alpha):
        return quantile(self, alpha)


def distribution(X: Position, Q: ScenarioMeasure) -> Distribution:
    _same_space(X.space, Q.space)
    mass: dict = {}
    for x, q in zip(X.values, Q.probs):
        if q == 0:
            continue
        mass[x] = mass.get(x, 0) + q
    atoms = []
    cum = 0
    for v in sorted(mass):
        cum = cum + mass[v]
        atoms.append([v, cum])
    # float cumulative sums may stop just short of 1
    atoms[-1][1] = Fraction(1) if is_exact(cum) else 1.0
    return Distribution(tuple((v, c) for v, c in atoms))


def quantile(F: Distribution, alpha):
    """Lower quantile ``inf{x : F(x) >= alpha}``; level 0 gives the minimum."""
    if not 0 <= alpha <= 1:
        raise ValueError(f"quantile level {alpha!r} outside [0, 1]")
    if alpha == 0:
        return F.atoms[0][0]
    i = bisect.bisect_left(F.cumulative, alpha)
    return F.atoms[min(i, len(F.atoms) - 1)][0]


def integrated_quantile(F: Distribution, alpha):
    """``int_0^alpha F^{-1}(s) ds`` computed over the quantile steps."""
    if not 0 <= alpha <= 1:
        raise ValueError(f"level {alpha!r} outside [0, 1]")
    total = 0 * alpha
    prev = 0
    for v, c in F.atoms:
        if prev >= alpha:
            break
        total += v * (min(c, alpha) - prev)
        prev = c
    return total


def quantile_breakpoints(F: Distribution) -> list:
    """Levels at which the quantile function jumps, plus both endpoints."""
    return [0] + [c for _, c in F.atoms]


def is_comonotone(X: Position, Y: Position) -> bool:
    _same_space(X.space, Y.space)
    xs, ys = X.values, Y.values
    n = len(xs)
    for a in range(n):
        for b in range(a + 1, n):
            if (xs[a] - xs[b]) * (ys[a] - ys[b]) < 0:
                return False
    return True
