"""Base risk measures evaluated on the law of a position under a scenario.

Every measure here is a function of ``F_{X,Q}`` only, so the same spec can be
applied under any scenario measure (probability-based risk measurement).
Values are losses: positive means risky.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import ClassVar

from .prob_core import (
    Distribution,
    Position,
    ScenarioMeasure,
    distribution,
    integrated_quantile,
    is_exact,
    quantile,
)

SPECTRUM_TOL = 1e-10


class SpecError(ValueError):
    """A risk-measure or combination spec is malformed or unsupported."""


def _check_level(alpha, lo_open=False):
    if not math.isfinite(alpha) or alpha > 1 or alpha < 0 or (lo_open and alpha == 0):
        bound = "(0, 1]" if lo_open else "[0, 1]"
        raise SpecError(f"level {alpha!r} outside {bound}")


@dataclass(frozen=True)
class RiskMeasureSpec:
    kind: ClassVar[str] = ""

    #: convex (and coherent) measures have a dual set; VaR and increasing spectra do not
    @property
    def coherent(self) -> bool:
        return True

    def to_dict(self) -> dict:
        return {"kind": self.kind}

    @staticmethod
    def from_dict(d: dict) -> "RiskMeasureSpec":
        try:
            kind = d["kind"]
        except (KeyError, TypeError):
            raise SpecError(f"measure spec {d!r} has no 'kind'") from None
        if kind == "EL":
            return EL()
        if kind == "ML":
            return ML()
        if kind == "VaR":
            return VaR(d["alpha"])
        if kind == "ES":
            return ES(d["alpha"])
        if kind == "Spectral":
            return Spectral(tuple((b, lv) for b, lv in d["breakpoints"]))
        if kind == "ESMixture":
            return ESMixture(tuple((a, m) for a, m in d["atoms"]))
        raise SpecError(f"unknown measure kind {kind!r}")

    @staticmethod
    def parse(text: str) -> "RiskMeasureSpec":
        """Short form used on the command line: ``EL``, ``ML``, ``VaR:0.25``, ``ES:0.5``."""
        name, _, arg = text.partition(":")
        if name in ("EL", "ML") and not arg:
            return RiskMeasureSpec.from_dict({"kind": name})
        if name in ("VaR", "ES") and arg:
            try:
                return RiskMeasureSpec.from_dict({"kind": name, "alpha": float(arg)})
            except ValueError:
                raise SpecError(f"bad level in {text!r}") from None
        raise SpecError(f"cannot parse measure {text!r}")


@dataclass(frozen=True)
class EL(RiskMeasureSpec):
    kind: ClassVar[str] = "EL"


@dataclass(frozen=True)
class ML(RiskMeasureSpec):
    kind: ClassVar[str] = "ML"


@dataclass(frozen=True)
class VaR(RiskMeasureSpec):
    alpha: float
    kind: ClassVar[str] = "VaR"

    def __post_init__(self):
        _check_level(self.alpha)

    @property
    def coherent(self) -> bool:
        return False

    def to_dict(self):
        return {"kind": self.kind, "alpha": self.alpha}


@dataclass(frozen=True)
class ES(RiskMeasureSpec):
    alpha: float
    kind: ClassVar[str] = "ES"

    def __post_init__(self):
        _check_level(self.alpha)

    def to_dict(self):
        return {"kind": self.kind, "alpha": self.alpha}


@dataclass(frozen=True)
class Spectral(RiskMeasureSpec):
    """Spectrum given as a right-continuous step function.

    ``breakpoints`` is a list of ``(u, level)``; the level holds on ``[u, next u)``
    and the last level holds up to 1. The first breakpoint must be 0.
    """

    breakpoints: tuple
    kind: ClassVar[str] = "Spectral"

    def __post_init__(self):
        bps = tuple((b, lv) for b, lv in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        if not bps or bps[0][0] != 0:
            raise SpecError("spectrum must start with a breakpoint at 0")
        for (b0, _), (b1, _) in zip(bps, bps[1:]):
            if not b0 < b1:
                raise SpecError("spectrum breakpoints must be strictly increasing")
        if bps[-1][0] >= 1:
            raise SpecError("spectrum breakpoints must lie in [0, 1)")
        if any(lv < 0 or not math.isfinite(lv) for _, lv in bps):
            raise SpecError("spectrum levels must be finite and nonnegative")
        total = self.distortion(1)
        if all(is_exact(b) and is_exact(lv) for b, lv in bps):
            if total != 1:
                raise SpecError(f"spectrum integrates to {total}, not 1")
        elif abs(total - 1) > SPECTRUM_TOL:
            raise SpecError(f"spectrum integrates to {float(total)!r}, not 1")

    @property
    def nonincreasing(self) -> bool:
        return all(a[1] >= b[1] for a, b in zip(self.breakpoints, self.breakpoints[1:]))

    @property
    def coherent(self) -> bool:
        return self.nonincreasing

    def intervals(self):
        """Yield ``(lo, hi, level)`` pieces covering [0, 1]."""
        bps = self.breakpoints
        for k, (b, lv) in enumerate(bps):
            hi = bps[k + 1][0] if k + 1 < len(bps) else 1
            yield b, hi, lv

    def level(self, u):
        out = self.breakpoints[0][1]
        for b, lv in self.breakpoints:
            if b <= u:
                out = lv
        return out

    def distortion(self, t):
        """``int_0^t phi(s) ds``; concave exactly when the spectrum is nonincreasing."""
        total = 0 * t
        for lo, hi, lv in self.intervals():
            if lo >= t:
                break
            total += lv * (min(hi, t) - lo)
        return total

    def to_dict(self):
        return {"kind": self.kind, "breakpoints": [list(p) for p in self.breakpoints]}


@dataclass(frozen=True)
class ESMixture(RiskMeasureSpec):
    """``sum_j mass_j ES(alpha_j)`` for a finitely supported measure on (0, 1]."""

    atoms: tuple
    kind: ClassVar[str] = "ESMixture"

    def __post_init__(self):
        atoms = tuple((a, m) for a, m in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not atoms:
            raise SpecError("mixture measure needs at least one atom")
        for a, m in atoms:
            _check_level(a, lo_open=True)
            if m < 0 or not math.isfinite(m):
                raise SpecError(f"mixture mass {m!r} is negative or not finite")
        total = sum(m for _, m in atoms)
        if all(is_exact(a) and is_exact(m) for a, m in atoms):
            if total != 1:
                raise SpecError(f"mixture masses sum to {total}, not 1")
        elif abs(total - 1) > 1e-12:
            raise SpecError(f"mixture masses sum to {float(total)!r}, not 1")

    def to_dict(self):
        return {"kind": self.kind, "atoms": [list(a) for a in self.atoms]}


@dataclass(frozen=True)
class RiskValue:
    value: float
    notes: tuple = field(default=())


@dataclass(frozen=True)
class RiskProfile:
    """Component risk values ``R_X(i)`` in the order of the index set."""

    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if not self.entries:
            raise ValueError("risk profile over an empty index set")
        if any(not math.isfinite(r) for r in self.entries):
            raise ValueError("risk profile entries must be finite")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]


def expected_shortfall(F: Distribution, alpha):
    if alpha == 0:
        return -quantile(F, 0)
    return -integrated_quantile(F, alpha) / alpha


def spectral_integral(F: Distribution, spec: Spectral):
    """``int_0^1 VaR^s phi(s) ds`` as an exact sum over overlapping steps."""
    total = 0
    prev = 0
    pieces = list(spec.intervals())
    if not all(is_exact(c) for c in F.cumulative):
        # mixed Fraction/float comparisons are slow; the law is float anyway
        pieces = [(float(lo), float(hi), float(lv)) for lo, hi, lv in pieces]
    for v, c in F.atoms:
        for lo, hi, lv in pieces:
            width = min(c, hi) - max(prev, lo)
            if width > 0 and lv != 0:
                total += -v * lv * width
        prev = c
    return total


def evaluate_distribution(spec: RiskMeasureSpec, F: Distribution):
    if isinstance(spec, EL):
        return -sum(v * m for v, m in F.masses())
    if isinstance(spec, ML):
        return -quantile(F, 0)
    if isinstance(spec, VaR):
        return -quantile(F, spec.alpha)
    if isinstance(spec, ES):
        return expected_shortfall(F, spec.alpha)
    if isinstance(spec, Spectral):
        return spectral_integral(F, spec)
    if isinstance(spec, ESMixture):
        return sum(m * expected_shortfall(F, a) for a, m in spec.atoms)
    raise SpecError(f"unsupported measure {spec!r}")


def evaluate(spec: RiskMeasureSpec, X: Position, Q: ScenarioMeasure | None = None):
    """Risk of ``X`` under scenario ``Q`` (the base probabilities when omitted)."""
    if Q is None:
        Q = X.space.base
    return evaluate_distribution(spec, distribution(X, Q))


def risk_value(spec: RiskMeasureSpec, X: Position, Q: ScenarioMeasure | None = None) -> RiskValue:
    """Like :func:`evaluate` but carrying notes about degenerate regimes."""
    if Q is None:
        Q = X.space.base
    F = distribution(X, Q)
    notes = []
    levels = []
    if isinstance(spec, ES):
        levels = [spec.alpha]
    elif isinstance(spec, ESMixture):
        levels = [a for a, _ in spec.atoms]
    smallest = min(m for _, m in F.masses())
    if any(0 < a < smallest for a in levels):
        notes.append("es-level-below-smallest-atom: value equals ML")
    return RiskValue(evaluate_distribution(spec, F), tuple(notes))


def components(specs, scenarios) -> list:
    """Pair specs with scenarios, broadcasting a single spec or a single scenario."""
    specs = list(specs) if isinstance(specs, (list, tuple)) else [specs]
    scenarios = list(scenarios) if isinstance(scenarios, (list, tuple)) else [scenarios]
    if not specs or not scenarios:
        raise ValueError("the index set must be non-empty")
    if len(specs) == 1:
        specs = specs * len(scenarios)
    elif len(scenarios) == 1:
        scenarios = scenarios * len(specs)
    elif len(specs) != len(scenarios):
        raise ValueError(
            f"{len(specs)} specs and {len(scenarios)} scenarios cannot be paired"
        )
    return list(zip(specs, scenarios))


def profile(specs, scenarios, X: Position) -> RiskProfile:
    return RiskProfile(tuple(evaluate(s, X, Q) for s, Q in components(specs, scenarios)))


def cross_law_invariance_check(
    spec: RiskMeasureSpec, X: Position, Q1: ScenarioMeasure, Y: Position, Q2: ScenarioMeasure,
    tol: float = 1e-12,
) -> bool:
    """False only when equal laws produced different risk values."""
    if distribution(X, Q1) != distribution(Y, Q2):
        return True
    a, b = evaluate(spec, X, Q1), evaluate(spec, Y, Q2)
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(a - b) <= tol


def as_fraction_spec(spec: RiskMeasureSpec) -> RiskMeasureSpec:
    """Copy of ``spec`` with all parameters converted to exact fractions."""
    fr = lambda v: Fraction(v).limit_denominator(10**12)  # noqa: E731
    if isinstance(spec, (EL, ML)):
        return spec
    if isinstance(spec, VaR):
        return VaR(fr(spec.alpha))
    if isinstance(spec, ES):
        return ES(fr(spec.alpha))
    if isinstance(spec, Spectral):
        return Spectral(tuple((fr(b), fr(lv)) for b, lv in spec.breakpoints))
    if isinstance(spec, ESMixture):
        return ESMixture(tuple((fr(a), fr(m)) for a, m in spec.atoms))
    raise SpecError(f"unsupported measure {spec!r}")


def describe(spec: RiskMeasureSpec) -> str:
    if isinstance(spec, (VaR, ES)):
        return f"{spec.kind}({spec.alpha})"
    return spec.kind


__all__ = [
    "EL", "ES", "ML", "VaR", "Spectral", "ESMixture", "RiskMeasureSpec", "RiskValue",
    "RiskProfile", "SpecError", "evaluate", "evaluate_distribution", "risk_value",
    "profile", "components", "cross_law_invariance_check", "expected_shortfall",
    "spectral_integral", "as_fraction_spec", "describe",
]
