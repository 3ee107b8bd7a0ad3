"""Mixtures of expected shortfall, step spectra, and their composed forms.

A finitely supported measure ``m`` on (0, 1] and a nonincreasing step spectrum
describe the same risk measure through ``phi(u) = sum_{alpha_j > u} m_j / alpha_j``.
Both directions are exact on ``Fraction`` inputs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .combinators import CombinationSpec, Composed, Mixture, WorstCase, check_weights
from .duality import PenaltyValue
from .measures import (
    EL,
    ES,
    ESMixture,
    RiskMeasureSpec,
    SpecError,
    Spectral,
    components,
    evaluate,
)
from .prob_core import Position, ScenarioMeasure, is_exact, mix_scenarios
from .reporting import CheckReport

# a mixture measure is an ESMixture spec; a spectrum is a Spectral spec
ESMixtureMeasure = ESMixture
Spectrum = Spectral


class DomainError(SpecError):
    """The spectrum increases somewhere, so no mixture of ES represents it."""


def _one_like(v):
    return 1 + 0 * v


def canonical(phi: Spectral) -> Spectral:
    """Drop breakpoints that do not change the level."""
    out = [phi.breakpoints[0]]
    for b, lv in phi.breakpoints[1:]:
        if lv != out[-1][1]:
            out.append((b, lv))
    return Spectral(tuple(out))


def merge_atoms(m: ESMixture) -> ESMixture:
    """Sum masses at equal levels, drop empty atoms, sort by level."""
    acc: dict = {}
    for a, w in m.atoms:
        acc[a] = acc.get(a, 0) + w
    atoms = tuple((a, acc[a]) for a in sorted(acc) if acc[a] != 0)
    return ESMixture(atoms)


def phi_from_m(m: ESMixture) -> Spectral:
    m = merge_atoms(m)
    levels = [a for a, _ in m.atoms]

    def ratio(w, a):
        return Fraction(w) / a if is_exact(w) and is_exact(a) else w / a

    def phi(u):
        return sum((ratio(w, a) for a, w in m.atoms if a > u), 0 * levels[0])

    bps = [(0 * levels[0], phi(0))]
    for a in levels:
        if a < 1:
            bps.append((a, phi(a)))
    return canonical(Spectral(tuple(bps)))


def m_from_phi(phi: Spectral) -> ESMixture:
    """Inverse of :func:`phi_from_m`: mass ``alpha * drop`` at each downward jump."""
    if not phi.nonincreasing:
        raise DomainError("spectrum is not nonincreasing; no ES-mixture representation")
    bps = phi.breakpoints
    atoms = []
    for (_, l0), (b1, l1) in zip(bps, bps[1:]):
        if l0 != l1:
            atoms.append((b1, b1 * (l0 - l1)))
    last = bps[-1][1]
    if last != 0:
        atoms.append((_one_like(last), last))
    return ESMixture(tuple(atoms))


def es_mixture_evaluate(m: ESMixture, X: Position, Q: ScenarioMeasure | None = None):
    return evaluate(m, X, Q)


def mixture_spectrum(spectra: Sequence[Spectral], mu: Sequence) -> Spectral:
    """Pointwise ``sum_i mu_i phi^i``."""
    mu = check_weights(mu)
    if len(mu) != len(spectra):
        raise ValueError("one weight per spectrum is required")
    points = sorted({b for s in spectra for b, _ in s.breakpoints})
    bps = tuple((b, sum(w * s.level(b) for w, s in zip(mu, spectra))) for b in points)
    return canonical(Spectral(bps))


def kusuoka_measure(spec: RiskMeasureSpec) -> ESMixture:
    """The single mixing measure of a comonotone coherent spec."""
    if isinstance(spec, EL):
        return ESMixture(((1, 1),))
    if isinstance(spec, ES):
        if spec.alpha == 0:
            raise SpecError("ES at level 0 has no mixing measure on (0, 1]")
        return ESMixture(((spec.alpha, _one_like(spec.alpha)),))
    if isinstance(spec, ESMixture):
        return merge_atoms(spec)
    if isinstance(spec, Spectral):
        return m_from_phi(spec)
    raise SpecError(f"{spec!r} has no ES-mixture representation")


def mixed_measure(ms: Sequence[ESMixture], mu: Sequence) -> ESMixture:
    """``sum_i mu_i m^i`` with atoms merged."""
    atoms = [(a, w * x) for w, m in zip(mu, ms) for a, x in m.atoms]
    return merge_atoms(ESMixture(tuple(atoms)))


def beta_penalty(ms: Sequence[ESMixture], mu: Sequence, m: ESMixture,
                 tol: float = 1e-12) -> PenaltyValue:
    """Zero iff ``m`` equals ``sum_i mu_i m^i`` atom by atom."""
    mu = check_weights(mu)
    target = mixed_measure(ms, mu)
    got = merge_atoms(m)
    a, b = dict(target.atoms), dict(got.atoms)
    exact = all(is_exact(v) for d in (a, b) for kv in d.items() for v in kv)
    eps = 0 if exact else tol
    same = all(abs(a.get(k, 0) - b.get(k, 0)) <= eps for k in set(a) | set(b))
    return PenaltyValue.zero() if same else PenaltyValue.inf()


def mixed_es(alpha, X: Position, scenarios: Sequence[ScenarioMeasure], mu: Sequence):
    """``sum_i mu_i ES_alpha(X under Q_i)``; not ES under the mixed probability."""
    return sum(w * evaluate(ES(alpha), X, Q) for w, Q in zip(mu, scenarios))


def _weight_vertices(f: CombinationSpec, n: int) -> list:
    if isinstance(f, Mixture):
        return [tuple(f.weights)]
    if isinstance(f, WorstCase):
        return [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    raise SpecError(f"{f!r}: only WorstCase and Mixture are supported here")


DEFAULT_GRID = tuple(k / 20 for k in range(1, 21))


def law_invariant_composed_check(f: CombinationSpec, specs, scenarios, X: Position,
                                 grid: Sequence = DEFAULT_GRID, tol: float = 1e-10) -> CheckReport:
    """Composed value against its ES-mixture representation.

    ``rhs_admissible`` maximizes over weight vertices with the penalty-free
    measure ``sum_i mu_i m^i``. ``rhs_grid`` drops the penalty and sweeps point
    masses on ``grid``, which can only overshoot. Mixtures must match
    ``rhs_admissible``; for the worst case only ``lhs <= rhs_grid`` is asserted.
    """
    comps = components(specs, scenarios)
    ms = [kusuoka_measure(s) for s, _ in comps]
    Qs = [Q for _, Q in comps]
    lhs = Composed.build(f, [s for s, _ in comps], Qs)(X)
    best_adm, best_adm_at = None, None
    best_grid, best_grid_at = None, None
    shared = all(m == ms[0] for m in ms)
    for mu in _weight_vertices(f, len(comps)):
        if shared:
            val = sum(x * mixed_es(a, X, Qs, mu) for a, x in ms[0].atoms)
        else:
            # distinct measures: each stays with its own scenario
            val = sum(w * evaluate(m, X, Q) for w, m, Q in zip(mu, ms, Qs) if w)
        if best_adm is None or val > best_adm:
            best_adm, best_adm_at = val, {"mu": list(mu), "m": mixed_measure(ms, mu).to_dict()}
        for a in grid:
            v = mixed_es(a, X, Qs, mu)
            if best_grid is None or v > best_grid:
                best_grid, best_grid_at = v, {"mu": list(mu), "alpha": a}
    if isinstance(f, Mixture):
        passed = abs(lhs - best_adm) <= tol * (1 + abs(lhs))
    else:
        passed = lhs <= best_grid + tol * (1 + abs(lhs))
    return CheckReport(
        f"kusuoka:{f.kind}", passed, 1,
        None if passed else {"X": list(X.values), "lhs": lhs},
        {"lhs": lhs, "rhs_admissible": best_adm, "admissible_at": best_adm_at,
         "rhs_grid": best_grid, "grid_at": best_grid_at, "gap": best_grid - lhs},
    )


def mixed_scenario_values(spec: RiskMeasureSpec, X: Position,
                          scenarios: Sequence[ScenarioMeasure], mu: Sequence):
    """``(rho under sum_i mu_i Q_i, sum_i mu_i rho under Q_i)``.

    For convex law-based measures the first is at least the second, since the
    risk of a fixed position is concave in the scenario probability.
    """
    mu = check_weights(mu)
    mixed = evaluate(spec, X, mix_scenarios(list(scenarios), mu))
    averaged = sum(w * evaluate(spec, X, Q) for w, Q in zip(mu, scenarios))
    return mixed, averaged


__all__ = [
    "ESMixtureMeasure", "Spectrum", "DomainError", "canonical", "merge_atoms",
    "phi_from_m", "m_from_phi", "es_mixture_evaluate", "mixture_spectrum",
    "kusuoka_measure", "mixed_measure", "beta_penalty", "mixed_es",
    "law_invariant_composed_check", "mixed_scenario_values", "DEFAULT_GRID",
]
