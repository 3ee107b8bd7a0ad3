"""The ten acceptance checks, shared by the test-suite and the ``report`` command.

Each ``criterion_*`` function is seeded and returns a ``CriterionResult``
whose ``details`` hold counts, worst gaps and any counterexamples.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .combinators import (
    F_AXIOMS,
    RHO_AXIOMS,
    Composed,
    Mixture,
    WorstCase,
    check_rho_axiom,
    f_has,
    lipschitz_check,
)
from .duality import (
    composed_dual_check,
    dual_evaluate,
    dual_evaluate_lp,
    dual_evaluate_vertices,
    mixture_penalty,
    worst_case_penalty_check,
)
from .elicit import (
    Pinball,
    SquaredError,
    elicit,
    elicit_numeric,
    es_tail_check,
    has_tail_tie,
    worst_case_elicitation,
)
from .kusuoka import (
    es_mixture_evaluate,
    m_from_phi,
    mixed_scenario_values,
    mixture_spectrum,
    phi_from_m,
)
from .measures import EL, ES, ML, VaR, ESMixture, Spectral, evaluate
from .orders import OrderKind, respects_order
from .prob_core import FiniteProbSpace, Position
from .reporting import plain

F = Fraction

STEP_SPECTRA = (
    Spectral(((F(0), F(3)), (F(1, 4), F(1)), (F(1, 2), F(0)))),
    Spectral(((F(0), F(2)), (F(1, 5), F(1)), (F(3, 5), F(1, 2)))),
    Spectral(((F(0), F(5, 4)), (F(1, 2), F(3, 4)))),
)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.number}: {self.title}"

    def to_dict(self):
        return {"criterion": self.number, "title": self.title, "passed": self.passed,
                "details": plain(self.details)}


def canonical_space(exact: bool = False) -> FiniteProbSpace:
    return FiniteProbSpace.uniform(4, exact=exact)


def canonical_position(space: FiniteProbSpace) -> Position:
    return space.position([-10, -5, 0, 5])


def canonical_q2(space: FiniteProbSpace):
    if space.exact:
        return space.scenario([F(4, 10), F(3, 10), F(2, 10), F(1, 10)])
    return space.scenario([0.4, 0.3, 0.2, 0.1])


def random_probs(rng: random.Random, n: int, exact: bool = False, zeros: bool = False) -> list:
    """Random probability vector; exact ones have small denominators."""
    w = [rng.randint(0 if zeros else 1, 9) for _ in range(n)]
    if sum(w) == 0:
        w[rng.randrange(n)] = 1
    if exact:
        total = sum(w)
        return [F(v, total) for v in w]
    total = float(sum(w))
    probs = [v / total for v in w]
    probs[-1] = 1.0 - sum(probs[:-1])
    return probs


def random_space(rng: random.Random, n: int, exact: bool = False) -> FiniteProbSpace:
    if rng.random() < 0.3:
        return FiniteProbSpace.uniform(n, exact=exact)
    return FiniteProbSpace.from_probs(random_probs(rng, n, exact))


def random_values(rng: random.Random, n: int, exact: bool = False) -> list:
    if exact or rng.random() < 0.3:
        vals = [rng.randint(-10, 10) for _ in range(n)]
        return [F(v) for v in vals] if exact else [float(v) for v in vals]
    return [rng.uniform(-10, 10) for _ in range(n)]


def _gap(a, b) -> float:
    return float(abs(a - b))


# --------------------------------------------------------------------------

def criterion_1(X: Position | None = None) -> CriterionResult:
    """Oracle values on the canonical workspace."""
    if X is None:
        X = canonical_position(canonical_space())
    expected = {"EL": 2.5, "VaR(0.25)": 10, "ES(0.5)": 7.5, "ML": 10}
    got = {"EL": evaluate(EL(), X), "VaR(0.25)": evaluate(VaR(0.25), X),
           "ES(0.5)": evaluate(ES(0.5), X), "ML": evaluate(ML(), X)}
    gaps = {k: _gap(got[k], v) for k, v in expected.items()}
    es1 = _gap(evaluate(ES(1), X), got["EL"])
    passed = all(g <= 1e-12 for g in gaps.values()) and es1 <= 1e-12
    return CriterionResult(1, "base-measure oracle values", passed,
                           {"values": got, "gaps": gaps, "ES(1)-EL": es1})


def criterion_2(seed: int = 0, count: int = 200) -> CriterionResult:
    """Direct evaluation equals the greedy dual supremum, the dual LP and vertex enumeration."""
    rng = random.Random(seed)
    specs = [EL(), ES(0.1), ES(0.25), ES(0.5), ES(0.9), ML(), *STEP_SPECTRA]
    worst_direct = worst_lp = 0.0
    exact_mismatch = []
    for t in range(count):
        n = rng.randint(4, 8)
        space = random_space(rng, n)
        X = space.position(random_values(rng, n))
        for spec in specs:
            direct = evaluate(spec, X)
            dual = dual_evaluate(spec, X)
            lp = dual_evaluate_lp(spec, X)
            worst_direct = max(worst_direct, _gap(direct, dual.value))
            worst_lp = max(worst_lp, _gap(dual.value, lp.value))
    exact_cases = 0
    for t in range(count // 4):
        space = random_space(rng, 4, exact=True)
        X = space.position(random_values(rng, 4, exact=True))
        for spec in specs:
            spec_x = _exact(spec)
            greedy = dual_evaluate(spec_x, X).value
            verts = dual_evaluate_vertices(spec_x, X).value
            direct = evaluate(spec_x, X)
            exact_cases += 1
            if not (greedy == verts == direct):
                exact_mismatch.append({"X": X.values, "probs": space.base_probs,
                                       "spec": spec_x.to_dict(), "greedy": greedy,
                                       "vertices": verts, "direct": direct})
    passed = worst_direct <= 1e-8 and worst_lp <= 1e-8 and not exact_mismatch
    return CriterionResult(2, "dual representation equality", passed, {
        "positions": count, "max_gap_direct_vs_dual": worst_direct,
        "max_gap_dual_vs_lp": worst_lp, "exact_4_atom_cases": exact_cases,
        "exact_mismatches": exact_mismatch[:3]})


def _exact(spec):
    from .measures import as_fraction_spec
    return as_fraction_spec(spec)


def density_grid(n_atoms: int, steps: int) -> list:
    """All density vectors with entries in multiples of ``n_atoms / steps`` and mean one."""
    out = []
    for cuts in itertools.combinations(range(steps + n_atoms - 1), n_atoms - 1):
        parts, prev = [], -1
        for c in cuts:
            parts.append(c - prev - 1)
            prev = c
        parts.append(steps + n_atoms - 2 - prev)
        out.append([F(n_atoms * p, steps) for p in parts])
    return out


def criterion_3(seed: int = 0, count: int = 200) -> CriterionResult:
    """Mixture of two ES levels: composed dual check and the density cap of the decomposition LP."""
    rng = random.Random(seed)
    f = Mixture((0.5, 0.5))
    specs = [ES(0.5), ES(0.25)]
    worst, failures = 0.0, []
    for t in range(count):
        n = rng.randint(4, 8)
        space = random_space(rng, n)
        X = space.position(random_values(rng, n))
        scen = [space.base] if t % 2 == 0 else [space.base, space.scenario(random_probs(rng, n))]
        rep = composed_dual_check(f, specs, scen, X)
        worst = max(worst, rep.details["gap"])
        if not rep.passed:
            failures.append(rep.witness)
    space = canonical_space()
    grid = density_grid(4, 40)
    mismatches = []
    for d in grid:
        Q = space.scenario([float(v) / 4 for v in d])
        feasible = mixture_penalty(specs, [space.base], (0.5, 0.5), Q).is_zero
        analytic = max(d) <= 3
        if feasible != analytic:
            mismatches.append([float(v) for v in d])
    passed = not failures and worst <= 1e-8 and not mismatches
    return CriterionResult(3, "mixture penalty and density cap", passed, {
        "positions": count, "max_gap": worst, "failures": failures[:3],
        "grid_points": len(grid), "cap_mismatches": mismatches[:5]})


def criterion_4() -> CriterionResult:
    """Worst-case penalty: component membership against the vertex decomposition LPs."""
    space = FiniteProbSpace.uniform(5)
    specs = [ES(0.5), ES(0.25)]
    grid = density_grid(5, 10)
    mismatches, infinite = [], 0
    for d in grid:
        Q = space.scenario([float(v) / 5 for v in d])
        rep = worst_case_penalty_check(specs, [space.base], Q)
        if rep.details["membership_inf"].infinite:
            infinite += 1
        if not rep.passed:
            mismatches.append([float(v) for v in d])
    return CriterionResult(4, "worst-case penalty collapse", not mismatches, {
        "grid_points": len(grid), "mismatches": len(mismatches),
        "examples": mismatches[:5], "infinite_points": infinite})


def random_spectrum(rng: random.Random) -> Spectral:
    """Nonincreasing step spectrum with rational breakpoints and unit integral."""
    k = rng.randint(1, 5)
    cuts = sorted(rng.sample(range(1, 20), k - 1))
    bps = [F(0)] + [F(c, 20) for c in cuts]
    raw = sorted((F(rng.randint(0, 10)) for _ in range(k)), reverse=True)
    if raw[0] == 0:
        raw[0] = F(1)
    widths = [(bps[i + 1] if i + 1 < k else F(1)) - bps[i] for i in range(k)]
    total = sum(r * w for r, w in zip(raw, widths))
    return Spectral(tuple((b, r / total) for b, r in zip(bps, raw)))


def criterion_5(seed: int = 0, count: int = 50) -> CriterionResult:
    """Round trip between step spectra and ES mixtures, and agreement of three evaluations."""
    from .kusuoka import canonical
    rng = random.Random(seed)
    roundtrip_fail, eval_gap, linear_fail = [], 0.0, []
    spectra = [random_spectrum(rng) for _ in range(count)]
    for phi in spectra:
        m = m_from_phi(phi)
        if phi_from_m(m) != canonical(phi) or m_from_phi(phi_from_m(m)) != m:
            roundtrip_fail.append(phi.to_dict())
        for _ in range(4):
            n = rng.randint(4, 8)
            space = random_space(rng, n)
            X = space.position(random_values(rng, n))
            a = evaluate(phi, X)
            b = es_mixture_evaluate(m, X)
            c = dual_evaluate(phi, X).value
            eval_gap = max(eval_gap, _gap(a, b), _gap(a, c))
    for _ in range(count):
        k = rng.randint(1, 3)
        group = rng.sample(spectra, k)
        mu = random_probs(rng, k, exact=True)
        mixed = mixture_spectrum(group, mu)
        space = random_space(rng, rng.randint(4, 8), exact=True)
        X = space.position(random_values(rng, space.n, exact=True))
        lhs = evaluate(mixed, X)
        rhs = sum(w * evaluate(s, X) for w, s in zip(mu, group))
        if lhs != rhs:
            linear_fail.append({"lhs": lhs, "rhs": rhs})
    passed = not roundtrip_fail and eval_gap <= 1e-8 and not linear_fail
    return CriterionResult(5, "ES-mixture layer", passed, {
        "spectra": count, "roundtrip_failures": roundtrip_fail[:3],
        "max_eval_gap": eval_gap, "linearity_failures": linear_fail[:3]})


_AXIOM_NEEDS = {
    "Monotonicity": ("Monotonicity",),
    "TranslationInvariance": ("TranslationInvariance",),
    "Convexity": ("Convexity", "Monotonicity"),
    "PositiveHomogeneity": ("PositiveHomogeneity",),
    "LawInvariance": (),
    "ComonotonicAdditivity": ("Additivity",),
    "FatouContinuity": ("Monotonicity",),
}


def criterion_6(seed: int = 0, trials: int = 10_000) -> CriterionResult:
    """Axiom inheritance for worst case and mixtures of coherent components."""
    space = FiniteProbSpace.uniform(5)
    comps = [ES(0.5), ES(0.2), STEP_SPECTRA[0]]
    rows = {}
    for f in (WorstCase(), Mixture((0.2, 0.3, 0.5))):
        rho = Composed.build(f, comps, [space.base])
        for axiom in RHO_AXIOMS:
            applicable = all(f_has(f, need) for need in _AXIOM_NEEDS[axiom])
            if not applicable:
                rows[f"{f.kind}:{axiom}"] = {"applicable": False}
                continue
            rep = check_rho_axiom(rho, axiom, seed=seed, trials=trials)
            rows[f"{f.kind}:{axiom}"] = {"applicable": True, "passed": rep.passed,
                                         "trials": rep.trials, "witness": rep.witness}
    # non-convex counterpart: the search has to find a witness
    var_rho = Composed.build(WorstCase(), [VaR(0.5)], [FiniteProbSpace.uniform(4).base])
    var_rep = check_rho_axiom(var_rho, "Convexity", seed=seed, trials=trials)
    applicable = [r for r in rows.values() if r["applicable"]]
    passed = all(r["passed"] for r in applicable) and not var_rep.passed
    assert set(F_AXIOMS) >= {n for needs in _AXIOM_NEEDS.values() for n in needs}
    return CriterionResult(6, "axiom inheritance", passed, {
        "rows": rows, "applicable_rows": len(applicable),
        "var_convexity_counterexample": var_rep.witness})


def criterion_7(seed: int = 0, trials: int = 10_000) -> CriterionResult:
    space = canonical_space()
    scen = [space.base, canonical_q2(space)]
    out, passed = {}, True
    for f, specs in ((WorstCase(), [ES(0.5), VaR(0.25)]), (Mixture((0.5, 0.5)), [ES(0.25), ML()])):
        rep = lipschitz_check(Composed.build(f, specs, scen), seed=seed, trials=trials)
        out[f.kind] = rep.to_dict()
        passed &= rep.passed
    return CriterionResult(7, "Lipschitz propagation", passed, out)


def criterion_8(seed: int = 0, trials: int = 10_000) -> CriterionResult:
    space = canonical_space()
    scen = [space.base, canonical_q2(space)]
    mix = Composed.build(Mixture((0.5, 0.5)), [ES(0.5), ES(0.25)], scen)
    wc = Composed.build(WorstCase(), [VaR(0.25), VaR(0.5)], scen)
    r2 = respects_order(mix, OrderKind(2, "set"), scen, seed=seed, trials=trials)
    r1 = respects_order(wc, OrderKind(1, "set"), scen, seed=seed, trials=trials)
    return CriterionResult(8, "dominance respect", r1.passed and r2.passed,
                           {"degree2_mixture_es": r2.to_dict(), "degree1_worst_case_var": r1.to_dict()})


def criterion_9(seed: int = 0, count: int = 200, wc_count: int = 50) -> CriterionResult:
    """Elicitation closed forms, the worst-case minimax identity and ES as a tail conditional mean."""
    rng = random.Random(seed)
    closed_fail, numeric_gap = [], 0.0
    for t in range(count):
        n = rng.randint(2, 8)
        space = random_space(rng, n, exact=True)
        X = space.position(random_values(rng, n, exact=True))
        Q = space.scenario(random_probs(rng, n, exact=True, zeros=True))
        a = F(rng.randint(1, 19), 20)
        if elicit(SquaredError(), X, Q) != evaluate(EL(), X, Q):
            closed_fail.append({"X": X.values, "kind": "squared"})
        if elicit(Pinball(a), X, Q) != evaluate(VaR(a), X, Q):
            closed_fail.append({"X": X.values, "kind": f"pinball:{a}"})
        if t < 20:
            Xf = FiniteProbSpace.from_probs([float(p) for p in space.base_probs]).position(
                [float(v) for v in X.values])
            Qf = Xf.space.scenario([float(q) for q in Q.probs])
            res = (max(X.values) - min(X.values)) / 1e5 if max(X.values) > min(X.values) else None
            numeric_gap = max(numeric_gap, _gap(elicit_numeric(SquaredError(), Xf, Qf, res),
                                                elicit(SquaredError(), Xf, Qf)))
    space = canonical_space()
    worked = worst_case_elicitation(SquaredError(), canonical_position(space),
                                    [space.base, canonical_q2(space)])
    wc_fail = []
    for t in range(wc_count):
        n = rng.randint(2, 6)
        sp = FiniteProbSpace.uniform(n)
        X = sp.position(random_values(rng, n))
        scen = [sp.scenario(random_probs(rng, n)) for _ in range(rng.choice([2, 3]))]
        S = SquaredError() if t % 2 == 0 else Pinball(rng.choice([0.1, 0.25, 0.5, 0.75]))
        res = worst_case_elicitation(S, X, scen)
        if not res.agrees:
            wc_fail.append({"S": S.kind, "X": X.values, "scenarios": [q.probs for q in scen],
                            **res.to_dict()})
    tail_fail, tail_checked, tail_tied = [], 0, 0
    for t in range(count):
        n = rng.randint(3, 8)
        sp = FiniteProbSpace.uniform(n)
        X = sp.position([rng.uniform(-10, 10) for _ in range(n)])
        a = rng.randint(1, n - 1) / n if rng.random() < 0.5 else rng.uniform(0.05, 0.95)
        if has_tail_tie(X, a):
            tail_tied += 1
            continue
        tail_checked += 1
        chk = es_tail_check(X, a)
        if not chk["passed"]:
            tail_fail.append({"X": X.values, "alpha": a, **chk})
    parts = {
        "closed_forms": not closed_fail,
        "worked_example": abs(worked.value - 5.0) <= 2 * worked.resolution,
        "worst_case_identity": not wc_fail,
        "es_tail_mean": not tail_fail,
    }
    return CriterionResult(9, "elicitation", all(parts.values()), {
        "parts": parts, "closed_form_failures": closed_fail[:3],
        "numeric_cross_check_gap": numeric_gap, "worked_example": worked.to_dict(),
        "worst_case_instances": wc_count, "worst_case_mismatches": len(wc_fail),
        "worst_case_examples": wc_fail[:3], "tail_checked": tail_checked,
        "tail_skipped_tied": tail_tied, "tail_failures": tail_fail[:3]})


def criterion_10(seed: int = 0, count: int = 200) -> CriterionResult:
    """Risk under the mixed scenario against the mixture of scenario risks."""
    rng = random.Random(seed)
    specs = {"EL": EL(), "ES(0.25)": ES(0.25), "ES(0.5)": ES(0.5), "ES(0.9)": ES(0.9),
             "ML": ML(), "Spectral": STEP_SPECTRA[1],
             "ESMixture": ESMixture(((0.5, 0.5), (0.25, 0.5)))}
    below, strict = [], {k: 0 for k in specs}
    el_gap = 0.0
    for t in range(count):
        n = rng.randint(3, 8)
        sp = FiniteProbSpace.uniform(n)
        X = sp.position(random_values(rng, n))
        scen = [sp.scenario(random_probs(rng, n, zeros=True)) for _ in range(2)]
        lam = rng.random()
        mu = (lam, 1 - lam)
        for name, spec in specs.items():
            mixed, averaged = mixed_scenario_values(spec, X, scen, mu)
            if mixed < averaged - 1e-10:
                below.append({"spec": name, "X": X.values, "mixed": mixed, "averaged": averaged})
            if mixed - averaged > 1e-10:
                strict[name] += 1
            if name == "EL":
                el_gap = max(el_gap, _gap(mixed, averaged))
    equality_iff_el = all((strict[k] == 0) == (k == "EL") for k in specs)
    passed = not below and el_gap <= 1e-10 and equality_iff_el
    return CriterionResult(10, "mixed-scenario inequality", passed, {
        "instances": count, "violations": below[:3], "el_max_gap": el_gap,
        "strict_counts": strict})


CRITERIA: dict[int, Callable[..., CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
}


def run_all(seed: int = 0, X: Position | None = None) -> list:
    out = []
    for k, fn in CRITERIA.items():
        if k == 1:
            out.append(fn(X))
        elif k == 4:
            out.append(fn())
        else:
            out.append(fn(seed=seed))
    return out
