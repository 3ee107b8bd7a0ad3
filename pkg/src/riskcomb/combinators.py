"""Combination functions on risk profiles and randomized axiom checkers.

A composed risk measure is ``rho(X) = f(R_X)`` where ``R_X`` is the profile of
component values. The checkers below search for counterexamples; a pass only
means none was found.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import ClassVar, Sequence

from .measures import (
    EL,
    ES,
    ML,
    RiskMeasureSpec,
    RiskProfile,
    SpecError,
    VaR,
    components,
    evaluate,
)
from .prob_core import (
    FiniteProbSpace,
    Position,
    distribution,
    integrated_quantile,
    is_exact,
    quantile,
)
from .reporting import CheckReport

WEIGHT_TOL = 1e-12

F_AXIOMS = (
    "Monotonicity",
    "TranslationInvariance",
    "PositiveHomogeneity",
    "Convexity",
    "Additivity",
    "Boundedness",
)
RHO_AXIOMS = (
    "Monotonicity",
    "TranslationInvariance",
    "Convexity",
    "PositiveHomogeneity",
    "LawInvariance",
    "ComonotonicAdditivity",
    "FatouContinuity",
)


def check_weights(weights) -> tuple:
    w = tuple(weights)
    if not w:
        raise SpecError("weights over an empty index set")
    if any(x < 0 or not math.isfinite(x) for x in w):
        raise SpecError("weights must be finite and nonnegative")
    total = sum(w)
    if all(is_exact(x) for x in w):
        if total != 1:
            raise SpecError(f"weights sum to {total}, not 1")
    elif abs(total - 1) > WEIGHT_TOL:
        raise SpecError(f"weights sum to {float(total)!r}, not 1")
    return w


@dataclass(frozen=True)
class CombinationSpec:
    kind: ClassVar[str] = ""

    @property
    def homogeneous(self) -> bool:
        return True

    def to_dict(self) -> dict:
        return {"kind": self.kind}

    @staticmethod
    def from_dict(d: dict) -> "CombinationSpec":
        kind = d.get("kind") if isinstance(d, dict) else None
        if kind == "WorstCase":
            return WorstCase()
        if kind == "Mixture":
            return Mixture(tuple(d["weights"]))
        if kind == "UtilityOfProfile":
            return UtilityOfProfile(RiskMeasureSpec.from_dict(d["pi"]), tuple(d["weights"]))
        raise SpecError(f"unknown combination kind {kind!r}")


@dataclass(frozen=True)
class WorstCase(CombinationSpec):
    kind: ClassVar[str] = "WorstCase"


@dataclass(frozen=True)
class Mixture(CombinationSpec):
    weights: tuple
    kind: ClassVar[str] = "Mixture"

    def __post_init__(self):
        object.__setattr__(self, "weights", check_weights(self.weights))

    def to_dict(self):
        return {"kind": self.kind, "weights": list(self.weights)}


@dataclass(frozen=True)
class UtilityOfProfile(CombinationSpec):
    """``u(R) = pi(-R)`` with ``pi`` one of EL, VaR, ES, ML on ``(I, weights)``."""

    pi: RiskMeasureSpec
    weights: tuple
    kind: ClassVar[str] = "UtilityOfProfile"

    def __post_init__(self):
        if not isinstance(self.pi, (EL, VaR, ES, ML)):
            raise SpecError("utility must be built from EL, VaR, ES or ML")
        object.__setattr__(self, "weights", check_weights(self.weights))

    @property
    def convex(self) -> bool:
        return not isinstance(self.pi, VaR)

    def to_dict(self):
        return {"kind": self.kind, "pi": self.pi.to_dict(), "weights": list(self.weights)}


def _weighted_law(R: Sequence, weights: Sequence):
    space = FiniteProbSpace(tuple(range(len(weights))), tuple(weights))
    return distribution(space.position(R), space.base)


def combine(f: CombinationSpec, R) -> float:
    entries = R.entries if isinstance(R, RiskProfile) else tuple(R)
    if not entries:
        raise ValueError("cannot combine an empty profile")
    if isinstance(f, WorstCase):
        return max(entries)
    weights = getattr(f, "weights", None)
    if weights is not None and len(weights) != len(entries):
        raise ValueError(f"profile has {len(entries)} entries, weights have {len(weights)}")
    if isinstance(f, Mixture):
        return sum(w * r for w, r in zip(weights, entries))
    if isinstance(f, UtilityOfProfile):
        pi = f.pi
        if isinstance(pi, EL):
            return sum(w * r for w, r in zip(weights, entries))
        if isinstance(pi, ML) or (isinstance(pi, ES) and pi.alpha == 0):
            return max(r for r, w in zip(entries, weights) if w > 0)
        F = _weighted_law(entries, weights)
        if isinstance(pi, VaR):
            return quantile(F, 1 - pi.alpha)
        # average of the upper alpha-tail of R under the weights
        a = pi.alpha
        mean = sum(w * r for w, r in zip(weights, entries))
        return (mean - integrated_quantile(F, 1 - a)) / a
    raise SpecError(f"unsupported combination {f!r}")


@dataclass(frozen=True)
class Composed:
    """The risk measure ``X -> f(rho^1(X), ..., rho^n(X))``."""

    f: CombinationSpec
    components: tuple

    @classmethod
    def build(cls, f: CombinationSpec, specs, scenarios) -> "Composed":
        return cls(f, tuple(components(specs, scenarios)))

    @property
    def space(self) -> FiniteProbSpace:
        return self.components[0][1].space

    def profile(self, X: Position) -> RiskProfile:
        return RiskProfile(tuple(evaluate(s, X, Q) for s, Q in self.components))

    def __call__(self, X: Position):
        return combine(self.f, self.profile(X))


def compose(f: CombinationSpec, specs, scenarios, X: Position):
    return Composed.build(f, specs, scenarios)(X)


# --------------------------------------------------------------------------
# falsification search

def _close(a, b, tol):
    return abs(a - b) <= tol * (1 + abs(a) + abs(b))


def _rand_vector(rng: random.Random, n: int) -> list:
    mode = rng.random()
    if mode < 0.3:
        return [float(rng.randint(-5, 5)) for _ in range(n)]
    if mode < 0.6:
        return [rng.uniform(-20, 20) for _ in range(n)]
    return [rng.gauss(0, 10) for _ in range(n)]


def _corpus(n: int) -> list:
    basis = [[1.0 if k == j else 0.0 for k in range(n)] for j in range(n)]
    vecs = [[0.0] * n, [1.0] * n, [-1.0] * n]
    vecs += basis + [[-x for x in v] for v in basis]
    return vecs


def _profile_dim(f: CombinationSpec, dim: int | None) -> int:
    weights = getattr(f, "weights", None)
    if weights is not None:
        return len(weights)
    return dim or 3


def check_f_axiom(
    f: CombinationSpec, axiom: str, seed: int = 0, trials: int = 10_000,
    dim: int | None = None, tol: float = 1e-9,
) -> CheckReport:
    """Seeded counterexample search for one property of a combination ``f``."""
    if axiom not in F_AXIOMS:
        raise ValueError(f"unknown axiom {axiom!r}")
    rng = random.Random(seed)
    n = _profile_dim(f, dim)
    corpus = _corpus(n)
    pairs = [(a, b) for a in corpus for b in corpus]
    comb = lambda R: combine(f, R)  # noqa: E731

    def one(R, S):
        lam = rng.choice([0.0, 0.5, 1.0, rng.random()])
        C = rng.choice([0.0, 1.0, -3.0, rng.uniform(-50, 50)])
        if axiom == "Monotonicity":
            lo = [min(r, s) for r, s in zip(R, S)]
            hi = [max(r, s) for r, s in zip(R, S)]
            a, b = comb(hi), comb(lo)
            return a >= b - tol * (1 + abs(a) + abs(b)), {"R": hi, "S": lo, "f(R)": a, "f(S)": b}
        if axiom == "TranslationInvariance":
            a, b = comb([r + C for r in R]), comb(R) + C
            return _close(a, b, tol), {"R": R, "C": C, "f(R+C)": a, "f(R)+C": b}
        if axiom == "PositiveHomogeneity":
            lam = lam * rng.choice([1.0, 10.0])
            a, b = comb([lam * r for r in R]), lam * comb(R)
            return _close(a, b, tol), {"R": R, "lambda": lam, "f(lR)": a, "l f(R)": b}
        if axiom == "Convexity":
            mid = [lam * r + (1 - lam) * s for r, s in zip(R, S)]
            a = comb(mid)
            b = lam * comb(R) + (1 - lam) * comb(S)
            return a <= b + tol * (1 + abs(a) + abs(b)), {
                "R": R, "S": S, "lambda": lam, "f(mix)": a, "mix of f": b}
        if axiom == "Additivity":
            a = comb([r + s for r, s in zip(R, S)])
            b = comb(R) + comb(S)
            return _close(a, b, tol), {"R": R, "S": S, "f(R+S)": a, "f(R)+f(S)": b}
        # Boundedness: never above the worst case of the profile
        a, b = comb(R), max(R)
        return a <= b + tol * (1 + abs(a) + abs(b)), {"R": R, "f(R)": a, "max R": b}

    done = 0
    for R, S in pairs:
        done += 1
        ok, wit = one(R, S)
        if not ok:
            return CheckReport(f"f:{f.kind}:{axiom}", False, done, wit)
    for _ in range(trials):
        done += 1
        ok, wit = one(_rand_vector(rng, n), _rand_vector(rng, n))
        if not ok:
            return CheckReport(f"f:{f.kind}:{axiom}", False, done, wit)
    return CheckReport(f"f:{f.kind}:{axiom}", True, done)


def random_position(rng: random.Random, space: FiniteProbSpace) -> Position:
    return space.position(_rand_vector(rng, space.n))


def comonotone_pair(rng: random.Random, space: FiniteProbSpace):
    n = space.n
    a = sorted(_rand_vector(rng, n))
    b = sorted(_rand_vector(rng, n))
    order = list(range(n))
    rng.shuffle(order)
    x, y = [0.0] * n, [0.0] * n
    for rank, k in enumerate(order):
        x[k], y[k] = a[rank], b[rank]
    return space.position(x), space.position(y)


def _law_preserving_permutation(rng: random.Random, X: Position) -> Position:
    """Permute payoffs among outcomes of equal base probability."""
    probs = X.space.base_probs
    groups: dict = {}
    for k, p in enumerate(probs):
        groups.setdefault(p, []).append(k)
    vals = list(X.values)
    out = list(vals)
    for idx in groups.values():
        perm = idx[:]
        rng.shuffle(perm)
        for src, dst in zip(idx, perm):
            out[dst] = vals[src]
    return X.space.position(out)


def check_rho_axiom(
    rho, axiom: str, seed: int = 0, trials: int = 10_000, tol: float = 1e-9,
    space: FiniteProbSpace | None = None,
) -> CheckReport:
    """Seeded counterexample search for a property of a risk measure on positions."""
    if axiom not in RHO_AXIOMS:
        raise ValueError(f"unknown axiom {axiom!r}")
    space = space or rho.space
    rng = random.Random(seed)
    n = space.n
    corpus = [space.position(v) for v in _corpus(n)]
    # indicator mixtures break VaR-type subadditivity
    corpus += [space.position([-v for v in c.values]) for c in corpus]
    name = f"rho:{getattr(getattr(rho, 'f', None), 'kind', 'custom')}:{axiom}"

    def one(X: Position, Y: Position):
        lam = rng.choice([0.5, rng.random()])
        if axiom == "Monotonicity":
            hi = space.position([max(a, b) for a, b in zip(X, Y)])
            lo = space.position([min(a, b) for a, b in zip(X, Y)])
            a, b = rho(hi), rho(lo)
            return a <= b + tol * (1 + abs(a) + abs(b)), {"X": hi, "Y": lo, "rho(X)": a, "rho(Y)": b}
        if axiom == "TranslationInvariance":
            C = rng.choice([1.0, -2.5, rng.uniform(-30, 30)])
            a, b = rho(X + C), rho(X) - C
            return _close(a, b, tol), {"X": X, "C": C, "rho(X+C)": a, "rho(X)-C": b}
        if axiom == "Convexity":
            mix = X * lam + Y * (1 - lam)
            a = rho(mix)
            b = lam * rho(X) + (1 - lam) * rho(Y)
            return a <= b + tol * (1 + abs(a) + abs(b)), {
                "X": X, "Y": Y, "lambda": lam, "rho(mix)": a, "mix of rho": b}
        if axiom == "PositiveHomogeneity":
            lam = lam * rng.choice([1.0, 7.0])
            a, b = rho(X * lam), lam * rho(X)
            return _close(a, b, tol), {"X": X, "lambda": lam, "rho(lX)": a, "l rho(X)": b}
        if axiom == "LawInvariance":
            Z = _law_preserving_permutation(rng, X)
            a, b = rho(X), rho(Z)
            return _close(a, b, tol), {"X": X, "Y": Z, "rho(X)": a, "rho(Y)": b}
        if axiom == "ComonotonicAdditivity":
            U, V = comonotone_pair(rng, space)
            a, b = rho(U + V), rho(U) + rho(V)
            return _close(a, b, tol), {"X": U, "Y": V, "rho(X+Y)": a, "rho(X)+rho(Y)": b}
        # FatouContinuity: along X_k = X + Z/k, rho(X) <= liminf rho(X_k)
        base = rho(X)
        tail = min(rho(X + Y * (1.0 / k)) for k in (10**3, 10**4, 10**5, 10**6))
        slack = max(abs(v) for v in Y) * 1e-3 + tol * (1 + abs(base))
        return base <= tail + slack, {"X": X, "Z": Y, "rho(X)": base, "tail": tail}

    done = 0
    seeds = [(a, b) for a in corpus for b in corpus]
    for X, Y in seeds:
        done += 1
        ok, wit = one(X, Y)
        if not ok:
            return CheckReport(name, False, done, {k: _show(v) for k, v in wit.items()})
    for _ in range(trials):
        done += 1
        ok, wit = one(random_position(rng, space), random_position(rng, space))
        if not ok:
            return CheckReport(name, False, done, {k: _show(v) for k, v in wit.items()})
    return CheckReport(name, True, done)


def _show(v):
    return list(v.values) if isinstance(v, Position) else v


def lipschitz_check(rho, seed: int = 0, trials: int = 10_000, tol: float = 1e-9,
                    space: FiniteProbSpace | None = None) -> CheckReport:
    """Sampled check of ``|rho(X) - rho(Y)| <= max_k |X_k - Y_k|``."""
    space = space or rho.space
    rng = random.Random(seed)
    worst = 0.0
    for t in range(trials):
        X = random_position(rng, space)
        if rng.random() < 0.5:
            eps = rng.choice([1e-3, 0.1, 1.0, 5.0])
            Y = space.position([x + rng.uniform(-eps, eps) for x in X])
        else:
            Y = random_position(rng, space)
        gap = abs(rho(X) - rho(Y))
        bound = X.sup_distance(Y)
        worst = max(worst, gap - bound)
        if gap > bound + tol * (1 + bound):
            return CheckReport("lipschitz", False, t + 1, {
                "X": list(X.values), "Y": list(Y.values), "gap": gap, "bound": bound})
    return CheckReport("lipschitz", True, trials, details={"max_excess": worst})


def f_has(f: CombinationSpec, axiom: str) -> bool:
    """Properties each supported combination is known to satisfy."""
    if isinstance(f, Mixture) or (isinstance(f, UtilityOfProfile) and isinstance(f.pi, EL)):
        return True
    if isinstance(f, WorstCase):
        return axiom != "Additivity"
    if isinstance(f, UtilityOfProfile):
        if axiom == "Additivity":
            return False
        if axiom == "Convexity":
            return f.convex
        return True
    return False
