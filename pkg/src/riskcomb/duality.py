"""Dual sets, penalty functions and LP checks of the dual representations.

Every coherent measure handled here is a concave-distortion integral, so its
dual set relative to a reference probability ``P`` is the core
``{Q : Q(A) <= g(P(A)) for every event A}`` of the capacity ``g o P``. The
specialised forms (singleton, density box, all of ``P``'s absolutely
continuous measures) are used whenever they are available.

Penalties of coherent measures are indicators, so a ``PenaltyValue`` is either
0 or infinite.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .combinators import (
    CombinationSpec,
    Composed,
    Mixture,
    UtilityOfProfile,
    WorstCase,
    check_weights,
    combine,
)
from .lp import FLOAT_TOL, enumerate_vertices, solve_lp
from .measures import (
    EL,
    ES,
    ML,
    ESMixture,
    RiskMeasureSpec,
    SpecError,
    Spectral,
    components,
    evaluate,
)
from .prob_core import (
    Position,
    ScenarioMeasure,
    is_exact,
    mix_scenarios,
)
from .reporting import CheckReport

MEMBER_TOL = 1e-10
GAP_TOL = 1e-8


class UnsupportedSpec(SpecError):
    """The measure or combination has no dual set handled here."""


@dataclass(frozen=True)
class PenaltyValue:
    value: object = 0
    infinite: bool = False

    def __post_init__(self):
        if not self.infinite and self.value < 0:
            raise ValueError("penalties are nonnegative")

    @classmethod
    def zero(cls) -> "PenaltyValue":
        return cls(0)

    @classmethod
    def inf(cls) -> "PenaltyValue":
        return cls(math.inf, True)

    @property
    def is_zero(self) -> bool:
        return not self.infinite and self.value == 0

    def __float__(self):
        return math.inf if self.infinite else float(self.value)

    def to_dict(self):
        return {"value": "inf" if self.infinite else self.value}


def _indicator(inside: bool) -> PenaltyValue:
    return PenaltyValue.zero() if inside else PenaltyValue.inf()


# --------------------------------------------------------------------------
# distortions and dual sets

def _require_coherent(spec: RiskMeasureSpec) -> None:
    if not isinstance(spec, (EL, ML, ES, Spectral, ESMixture)) or not spec.coherent:
        raise UnsupportedSpec(f"{spec!r} is not coherent; only indicator penalties are supported")


def distortion_of(spec: RiskMeasureSpec) -> Callable:
    """Concave ``g`` with ``rho(X) = sum of losses weighted by increments of g``."""
    _require_coherent(spec)
    if isinstance(spec, EL):
        return lambda t: t
    if isinstance(spec, ML) or (isinstance(spec, ES) and spec.alpha == 0):
        return lambda t: 0 * t + (1 if t > 0 else 0)
    if isinstance(spec, ES):
        a = spec.alpha
        return lambda t: min(t / a, 0 * t + 1)
    if isinstance(spec, ESMixture):
        atoms = spec.atoms
        return lambda t: sum(m * min(t / a, 0 * t + 1) for a, m in atoms)
    return spec.distortion


@dataclass(frozen=True)
class DualSetSpec:
    """Dual set of one coherent component relative to reference probabilities ``ref``.

    ``kind`` is one of ``singleton``, ``full``, ``density-box`` or
    ``spectral-majorization``. ``bound`` is the density cap for boxes.
    """

    kind: str
    ref: tuple
    bound: object = None
    g: Callable | None = field(default=None, compare=False)

    @classmethod
    def of(cls, spec: RiskMeasureSpec, ref: ScenarioMeasure) -> "DualSetSpec":
        _require_coherent(spec)
        probs = ref.probs
        if isinstance(spec, EL):
            return cls("singleton", probs)
        if isinstance(spec, ML) or (isinstance(spec, ES) and spec.alpha == 0):
            return cls("full", probs)
        if isinstance(spec, ES):
            return cls("density-box", probs, bound=1 / spec.alpha)
        return cls("spectral-majorization", probs, g=distortion_of(spec))

    @property
    def n(self) -> int:
        return len(self.ref)

    def constraints(self):
        """Rows ``(A_ub, b_ub, A_eq, b_eq)`` describing the set for ``q >= 0``."""
        n, p = self.n, self.ref
        unit = lambda k: [1 if j == k else 0 for j in range(n)]  # noqa: E731
        A_ub, b_ub, A_eq, b_eq = [], [], [[1] * n], [1]
        if self.kind == "singleton":
            for k in range(n):
                A_eq.append(unit(k))
                b_eq.append(p[k])
        elif self.kind == "full":
            for k in range(n):
                if p[k] == 0:
                    A_eq.append(unit(k))
                    b_eq.append(0)
        elif self.kind == "density-box":
            for k in range(n):
                A_ub.append(unit(k))
                b_ub.append(self.bound * p[k])
        else:
            for size in range(1, n):
                for A in itertools.combinations(range(n), size):
                    A_ub.append([1 if j in A else 0 for j in range(n)])
                    b_ub.append(self.g(sum(p[j] for j in A)))
            for k in range(n):
                if p[k] == 0:
                    A_eq.append(unit(k))
                    b_eq.append(0)
        return A_ub, b_ub, A_eq, b_eq

    def contains(self, Q: ScenarioMeasure | Sequence, tol: float = MEMBER_TOL) -> bool:
        q = Q.probs if isinstance(Q, ScenarioMeasure) else tuple(Q)
        p = self.ref
        exact = all(is_exact(v) for v in (*q, *p)) and (
            self.bound is None or is_exact(self.bound))
        tol = 0 if exact else tol
        if any(qk > tol and pk == 0 for qk, pk in zip(q, p)):
            return False
        if self.kind == "singleton":
            return all(abs(a - b) <= tol for a, b in zip(q, p))
        if self.kind == "full":
            return True
        if self.kind == "density-box":
            return all(qk <= self.bound * pk + tol for qk, pk in zip(q, p))
        # densities in decreasing order; the prefix masses bound every event
        order = sorted((k for k in range(self.n) if p[k] > 0), key=lambda k: -q[k] / p[k])
        Pm = Qm = 0
        for k in order:
            Pm, Qm = Pm + p[k], Qm + q[k]
            if Qm > self.g(Pm) + tol:
                return False
        return True


def min_penalty(spec: RiskMeasureSpec, Q: ScenarioMeasure | Sequence,
                ref: ScenarioMeasure | None = None) -> PenaltyValue:
    """Minimal penalty of a coherent ``spec`` (relative to ``ref``) at ``Q``."""
    if ref is None:
        ref = Q.space.base
    return _indicator(DualSetSpec.of(spec, ref).contains(Q))


# --------------------------------------------------------------------------
# dual evaluation

@dataclass(frozen=True)
class DualValue:
    value: object
    certificate: tuple

    def to_dict(self):
        return {"value": self.value, "certificate": list(self.certificate)}


def dual_evaluate(spec: RiskMeasureSpec, X: Position,
                  ref: ScenarioMeasure | None = None) -> DualValue:
    """``sup E_Q[-X]`` over the dual set, attained by the greedy rearrangement.

    The worst outcomes receive the largest admissible mass: outcome ``k`` in
    increasing payoff order gets ``g(P_{<=k}) - g(P_{<k})``.
    """
    ref = X.space.base if ref is None else ref
    g = distortion_of(spec)
    p = ref.probs
    order = sorted(range(len(p)), key=lambda k: (X.values[k], k))
    zero = 0 * p[0]
    q = [zero] * len(p)
    cum = zero
    prev = g(cum)
    for k in order:
        if p[k] == 0:
            continue
        cum = cum + p[k]
        cur = g(cum)
        q[k] = cur - prev
        prev = cur
    value = sum(-x * qk for x, qk in zip(X.values, q))
    return DualValue(value, tuple(q))


def dual_evaluate_lp(spec: RiskMeasureSpec, X: Position, ref: ScenarioMeasure | None = None,
                     exact: bool = False) -> DualValue:
    """The same supremum computed as a linear program over the dual set."""
    ref = X.space.base if ref is None else ref
    if isinstance(spec, (Spectral, ESMixture)):
        return _mixture_box_lp(spec, X, ref, exact)
    A_ub, b_ub, A_eq, b_eq = DualSetSpec.of(spec, ref).constraints()
    c = [-x for x in X.values]
    res = solve_lp(c, A_ub, b_ub, A_eq, b_eq, maximize=True, exact=exact)
    if not res.ok:
        raise RuntimeError(f"dual LP is {res.status}")
    return DualValue(res.value, tuple(res.x))


def _mixture_box_lp(spec, X: Position, ref: ScenarioMeasure, exact: bool) -> DualValue:
    """Dual LP for an ES mixture: ``Q = sum_j Q^j`` with ``Q^j`` in ``m_j`` times an ES box.

    The cores of the submodular capacities ``min(P(A)/alpha_j, 1)`` add up to
    the core of their mixture, so this set equals the event-wise description
    with far fewer rows.
    """
    from .kusuoka import kusuoka_measure

    _require_coherent(spec)
    atoms = kusuoka_measure(spec).atoms
    n, J = len(ref.probs), len(atoms)
    nv = n * J
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for j, (a, m) in enumerate(atoms):
        for k in range(n):
            row = [0] * nv
            row[j * n + k] = 1
            A_ub.append(row)
            b_ub.append(m * ref.probs[k] / a)
        row = [0] * nv
        row[j * n:(j + 1) * n] = [1] * n
        A_eq.append(row)
        b_eq.append(m)
    c = [-x for _ in range(J) for x in X.values]
    res = solve_lp(c, A_ub, b_ub, A_eq, b_eq, maximize=True, exact=exact)
    if not res.ok:
        raise RuntimeError(f"dual LP is {res.status}")
    q = tuple(sum(res.x[j * n + k] for j in range(J)) for k in range(n))
    return DualValue(res.value, q)


def dual_evaluate_vertices(spec: RiskMeasureSpec, X: Position,
                           ref: ScenarioMeasure | None = None) -> DualValue:
    """Exhaustive maximum over the vertices of the dual polytope (exact)."""
    ref = X.space.base if ref is None else ref
    ds = DualSetSpec.of(as_exact_spec(spec), _exact_measure(ref))
    A_ub, b_ub, A_eq, b_eq = ds.constraints()
    A_eq, b_eq = _independent_rows(A_eq, b_eq)
    verts = enumerate_vertices(A_ub, b_ub, A_eq, b_eq, n=ds.n)
    xs = [Fraction(x) for x in X.values]
    best = max(verts, key=lambda v: sum(-x * q for x, q in zip(xs, v)))
    return DualValue(sum(-x * q for x, q in zip(xs, best)), tuple(best))


def as_exact_spec(spec: RiskMeasureSpec) -> RiskMeasureSpec:
    from .measures import as_fraction_spec
    return as_fraction_spec(spec)


def _exact_measure(Q: ScenarioMeasure) -> ScenarioMeasure:
    if all(is_exact(q) for q in Q.probs):
        return Q
    from .prob_core import FiniteProbSpace
    probs = [Fraction(q).limit_denominator(10**12) for q in Q.probs]
    probs[-1] = 1 - sum(probs[:-1])
    sp = FiniteProbSpace(Q.space.outcome_ids, tuple(probs))
    return sp.base


def _independent_rows(A, b):
    """Drop linearly dependent equality rows (exact elimination)."""
    kept, kept_b, basis = [], [], []
    for row, rhs in zip(A, b):
        r = [Fraction(v) for v in row]
        for piv, brow in basis:
            if r[piv] != 0:
                f = r[piv] / brow[piv]
                r = [a - f * c for a, c in zip(r, brow)]
        nz = next((j for j, v in enumerate(r) if v != 0), None)
        if nz is not None:
            basis.append((nz, r))
            kept.append(row)
            kept_b.append(rhs)
    return kept, kept_b


# --------------------------------------------------------------------------
# combination penalties

def _admissible_rows(f: CombinationSpec, n: int):
    """Linear description of the weights where the penalty of ``f`` vanishes."""
    A_ub, b_ub, A_eq, b_eq = [], [], [[1] * n], [1]
    unit = lambda k: [1 if j == k else 0 for j in range(n)]  # noqa: E731
    if isinstance(f, WorstCase):
        pass
    elif isinstance(f, Mixture) or (isinstance(f, UtilityOfProfile) and isinstance(f.pi, EL)):
        for k in range(n):
            A_eq.append(unit(k))
            b_eq.append(f.weights[k])
    elif isinstance(f, UtilityOfProfile) and (
            isinstance(f.pi, ML) or (isinstance(f.pi, ES) and f.pi.alpha == 0)):
        for k in range(n):
            if f.weights[k] == 0:
                A_eq.append(unit(k))
                b_eq.append(0)
    elif isinstance(f, UtilityOfProfile) and isinstance(f.pi, ES):
        for k in range(n):
            A_ub.append(unit(k))
            b_ub.append(f.weights[k] / f.pi.alpha)
    else:
        raise UnsupportedSpec(f"{f!r} is not positively homogeneous and convex")
    return A_ub, b_ub, A_eq, b_eq


def admissible(f: CombinationSpec, mu: Sequence, tol: float = MEMBER_TOL) -> bool:
    A_ub, b_ub, A_eq, b_eq = _admissible_rows(f, len(mu))
    if any(m < -tol for m in mu):
        return False
    ok_ub = all(sum(a * m for a, m in zip(r, mu)) <= b + tol for r, b in zip(A_ub, b_ub))
    ok_eq = all(abs(sum(a * m for a, m in zip(r, mu)) - b) <= tol for r, b in zip(A_eq, b_eq))
    return ok_ub and ok_eq


def sampled_gamma_bound(f: CombinationSpec, mu: Sequence, samples) -> float:
    """``max over R in samples of sum_i mu_i R_i - f(R)``: a lower bound of the penalty."""
    return max(sum(m * r for m, r in zip(mu, R)) - combine(f, R) for R in samples)


def profile_sampler(n: int, seed: int = 0, count: int = 2000) -> list:
    rng = random.Random(seed)
    out = [[0.0] * n]
    for k in range(n):
        out.append([1.0 if j == k else 0.0 for j in range(n)])
        out.append([-1.0 if j == k else 0.0 for j in range(n)])
    while len(out) < count:
        out.append([rng.uniform(-20, 20) for _ in range(n)])
    return out


def gamma_f(f: CombinationSpec, mu: Sequence, samples=None, tol: float = 1e-10) -> PenaltyValue:
    """Penalty of a homogeneous combination at ``mu``; checked against sampled profiles."""
    mu = check_weights(mu)
    value = _indicator(admissible(f, mu))
    samples = samples if samples is not None else profile_sampler(len(mu))
    bound = sampled_gamma_bound(f, mu, samples)
    if bound > float(value) + tol:
        raise RuntimeError(
            f"sampled lower bound {bound!r} exceeds closed-form penalty {float(value)!r}")
    return value


def _stack(blocks, n_total, offset_of):
    """Place per-block rows into a wide matrix."""
    rows = []
    for block, rows_b in blocks:
        off = offset_of[block]
        for r in rows_b:
            full = [0] * n_total
            full[off:off + len(r)] = r
            rows.append(full)
    return rows


def mixture_penalty(specs, scenarios, mu: Sequence, Q: ScenarioMeasure,
                    exact: bool = False) -> PenaltyValue:
    """Zero iff ``Q = sum_i mu_i Q^i`` with each ``Q^i`` in the i-th dual set.

    Components with zero weight remain constrained to their own dual set,
    which is never empty, so they do not affect feasibility.
    """
    comps = components(specs, scenarios)
    mu = check_weights(mu)
    if len(mu) != len(comps):
        raise ValueError("one weight per component is required")
    n = Q.space.n
    nv = n * len(comps)
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for i, (spec, Qi) in enumerate(comps):
        a, b, ae, be = DualSetSpec.of(spec, Qi).constraints()
        for r, v in zip(a, b):
            A_ub.append([0] * (i * n) + list(r) + [0] * (nv - (i + 1) * n))
            b_ub.append(v)
        for r, v in zip(ae, be):
            A_eq.append([0] * (i * n) + list(r) + [0] * (nv - (i + 1) * n))
            b_eq.append(v)
    for k in range(n):
        row = [0] * nv
        for i in range(len(comps)):
            row[i * n + k] = mu[i]
        A_eq.append(row)
        b_eq.append(Q.probs[k])
    res = solve_lp([0] * nv, A_ub, b_ub, A_eq, b_eq, exact=exact)
    return _indicator(res.ok)


@dataclass
class HullSolution:
    value: object
    Q: tuple
    weights: tuple
    blocks: tuple  # unnormalized Q^i, each of total mass weights[i]


def hull_lp(f: CombinationSpec, specs, scenarios, X: Position,
            exact: bool = False) -> HullSolution:
    """Maximize ``E_Q[-X]`` over ``{sum_i Q^i : Q^i in lambda_i D_i, lambda admissible}``.

    Scaling each dual set by its weight keeps the problem linear, and the
    feasible ``Q`` are exactly the mixtures of component dual sets with
    weights where the combination penalty vanishes.
    """
    comps = components(specs, scenarios)
    m, n = len(comps), X.space.n
    nv = n * m + m
    lam = lambda i: n * m + i  # noqa: E731
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for i, (spec, Qi) in enumerate(comps):
        a, b, ae, be = DualSetSpec.of(spec, Qi).constraints()
        for rows, rhs, tgt_A, tgt_b in ((a, b, A_ub, b_ub), (ae, be, A_eq, b_eq)):
            for r, v in zip(rows, rhs):
                full = [0] * nv
                full[i * n:(i + 1) * n] = r
                full[lam(i)] = -v
                tgt_A.append(full)
                tgt_b.append(0)
    fa, fb, fae, fbe = _admissible_rows(f, m)
    for rows, rhs, tgt_A, tgt_b in ((fa, fb, A_ub, b_ub), (fae, fbe, A_eq, b_eq)):
        for r, v in zip(rows, rhs):
            full = [0] * nv
            full[n * m:] = r
            tgt_A.append(full)
            tgt_b.append(v)
    c = [-x for _ in range(m) for x in X.values] + [0] * m
    res = solve_lp(c, A_ub, b_ub, A_eq, b_eq, maximize=True, exact=exact)
    if not res.ok:
        raise RuntimeError(f"hull LP is {res.status}; inputs are inconsistent")
    Q = tuple(sum(res.x[i * n + k] for i in range(m)) for k in range(n))
    blocks = tuple(tuple(res.x[i * n:(i + 1) * n]) for i in range(m))
    return HullSolution(res.value, Q, tuple(res.x[n * m:]), blocks)


def composed_dual_check(f: CombinationSpec, specs, scenarios, X: Position,
                        tol: float = GAP_TOL, exact: bool = False) -> CheckReport:
    """Direct evaluation of ``f(R_X)`` against the maximum over the composed dual set."""
    lhs = Composed.build(f, specs, scenarios)(X)
    sol = hull_lp(f, specs, scenarios, X, exact=exact)
    gap = abs(lhs - sol.value)
    trace = []
    for i, ((spec, Qi), w) in enumerate(zip(components(specs, scenarios), sol.weights)):
        entry = {"component": i, "weight": w, "penalty": None}
        if w > FLOAT_TOL:
            entry["penalty"] = min_penalty(spec, _normalized(sol.blocks[i]), Qi)
        trace.append(entry)
    return CheckReport(
        f"dual-check:{f.kind}", gap <= tol, 1,
        None if gap <= tol else {"X": list(X.values), "lhs": lhs, "rhs": sol.value},
        {"lhs": lhs, "rhs": sol.value, "gap": gap, "certificate_Q": list(sol.Q),
         "weights": list(sol.weights), "penalty_trace": trace},
    )


def _normalized(q):
    total = sum(q)
    return tuple(v / total for v in q)


def worst_case_penalty_check(specs, scenarios, Q: ScenarioMeasure,
                             exact: bool = False) -> CheckReport:
    """Membership-based ``inf_i`` penalty against the decomposition LP at the vertices."""
    comps = components(specs, scenarios)
    member = [min_penalty(s, Q, Qi) for s, Qi in comps]
    lp_vals = []
    for i in range(len(comps)):
        delta = tuple(1 if j == i else 0 for j in range(len(comps)))
        lp_vals.append(mixture_penalty([s for s, _ in comps], [q for _, q in comps],
                                       delta, Q, exact=exact))
    inf_member = min(member, key=float)
    inf_lp = min(lp_vals, key=float)
    agree = [a.infinite == b.infinite for a, b in zip(member, lp_vals)]
    ok = all(agree) and inf_member.infinite == inf_lp.infinite
    return CheckReport(
        "worst-case-penalty", ok, 1,
        None if ok else {"Q": list(Q.probs)},
        {"membership_inf": inf_member, "lp_inf": inf_lp,
         "membership": member, "lp": lp_vals},
    )


def mixed_certificate(certificates: Sequence[Sequence], mu: Sequence, space) -> ScenarioMeasure:
    """``sum_i mu_i Q^i`` validated as a probability measure on ``space``."""
    return mix_scenarios([space.scenario(c) for c in certificates], mu)


__all__ = [
    "PenaltyValue", "DualSetSpec", "DualValue", "HullSolution", "UnsupportedSpec",
    "distortion_of", "min_penalty", "dual_evaluate", "dual_evaluate_lp",
    "dual_evaluate_vertices", "admissible", "gamma_f", "sampled_gamma_bound",
    "profile_sampler", "mixture_penalty", "hull_lp", "composed_dual_check",
    "worst_case_penalty_check", "mixed_certificate", "FLOAT_TOL",
]
