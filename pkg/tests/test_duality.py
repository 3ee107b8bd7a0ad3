from fractions import Fraction

import pytest

from riskcomb import EL, ES, ML, ESMixture, Mixture, Spectral, UtilityOfProfile, VaR, WorstCase
from riskcomb.duality import (
    DualSetSpec,
    UnsupportedSpec,
    composed_dual_check,
    dual_evaluate,
    dual_evaluate_lp,
    dual_evaluate_vertices,
    gamma_f,
    hull_lp,
    min_penalty,
    mixture_penalty,
    profile_sampler,
    sampled_gamma_bound,
    worst_case_penalty_check,
)

STEP = Spectral(((0, 3), (0.25, 1), (0.5, 0)))


def test_es_membership(space):
    assert min_penalty(ES(0.5), space.scenario([0.5, 0.5, 0, 0])).is_zero
    assert min_penalty(ES(0.5), space.scenario([0.6, 0.4, 0, 0])).infinite


def test_el_membership(space, q2):
    assert min_penalty(EL(), space.base).is_zero
    assert min_penalty(EL(), q2).infinite


def test_ml_membership(space):
    assert min_penalty(ML(), space.scenario([1, 0, 0, 0])).is_zero


def test_spectral_membership(space):
    # cap is the integral of the spectrum: 0.75 over the top quarter, 1 over the top half
    assert min_penalty(STEP, space.scenario([0.75, 0.25, 0, 0])).is_zero
    assert min_penalty(STEP, space.scenario([0.8, 0.2, 0, 0])).infinite


def test_var_unsupported(space):
    with pytest.raises(UnsupportedSpec):
        min_penalty(VaR(0.25), space.base)


def test_dual_values(space, X):
    d = dual_evaluate(ES(0.5), X)
    assert d.value == pytest.approx(7.5)
    assert d.certificate == pytest.approx((0.5, 0.5, 0, 0))
    m = dual_evaluate(ML(), X)
    assert m.value == 10 and m.certificate == pytest.approx((1, 0, 0, 0))
    assert dual_evaluate(EL(), X).value == pytest.approx(2.5)


@pytest.mark.parametrize("spec", [EL(), ML(), ES(0.5), ES(0.25), STEP])
def test_three_routes_agree(space, X, spec):
    a = dual_evaluate(spec, X).value
    assert dual_evaluate_lp(spec, X).value == pytest.approx(a, abs=1e-9)
    assert dual_evaluate_vertices(spec, X).value == pytest.approx(a, abs=1e-12)


def test_exact_vertex_value(space, X):
    assert dual_evaluate_vertices(STEP, X).value == Fraction(35, 4)


def test_dual_set_contains(space):
    ds = DualSetSpec.of(ES(0.25), space.base)
    assert ds.kind == "density-box"
    assert ds.contains(space.scenario([1, 0, 0, 0]))


def test_gamma_f():
    assert gamma_f(WorstCase(), (0.3, 0.7)).is_zero
    assert gamma_f(Mixture((0.5, 0.5)), (0.5, 0.5)).is_zero
    assert gamma_f(Mixture((0.5, 0.5)), (1, 0)).infinite
    assert gamma_f(UtilityOfProfile(ES(0.5), (0.5, 0.5)), (1, 0)).is_zero
    assert gamma_f(UtilityOfProfile(ES(0.5), (0.5, 0.5)), (0, 1)).is_zero


def test_sampled_gamma_worst_case():
    samples = profile_sampler(3, seed=0)
    assert sampled_gamma_bound(WorstCase(), (0.2, 0.3, 0.5), samples) == pytest.approx(0, abs=1e-10)


def test_mixture_penalty_decomposition(space):
    mu = (0.5, 0.5)
    specs = [ES(0.5), ES(0.25)]
    assert mixture_penalty(specs, [space.base], mu, space.scenario([0.75, 0.25, 0, 0])).is_zero
    assert mixture_penalty(specs, [space.base], mu, space.scenario([0.8, 0.2, 0, 0])).infinite
    # a point mass on one component reduces to that component's penalty
    Q = space.scenario([0.5, 0.5, 0, 0])
    assert mixture_penalty(specs, [space.base], (1, 0), Q) == min_penalty(ES(0.5), Q)


def test_composed_dual_check(space, X):
    rep = composed_dual_check(Mixture((0.5, 0.5)), [ES(0.5), ES(0.25)], [space.base], X)
    assert rep.passed
    assert rep.details["lhs"] == pytest.approx(8.75) and rep.details["rhs"] == pytest.approx(8.75)
    rep = composed_dual_check(WorstCase(), [EL(), ES(0.5)], [space.base], X)
    assert rep.passed and rep.details["rhs"] == pytest.approx(7.5)


def test_constant_position(space):
    c = space.position([3, 3, 3, 3])
    for f in (WorstCase(), Mixture((0.5, 0.5))):
        rep = composed_dual_check(f, [ES(0.5), ML()], [space.base], c)
        assert rep.details["lhs"] == pytest.approx(-3) and rep.details["rhs"] == pytest.approx(-3)


def test_hull_exact(exact_space, q2_exact):
    X = exact_space.position([-10, -5, 0, 5])
    sol = hull_lp(WorstCase(), [ES(Fraction(1, 2))], [exact_space.base, q2_exact], X, exact=True)
    assert sol.value == 9


def test_worst_case_penalty(space):
    specs = [ES(0.5), ES(0.25)]
    rep = worst_case_penalty_check(specs, [space.base], space.scenario([0.6, 0.4, 0, 0]))
    assert rep.passed and rep.details["membership_inf"].is_zero
    assert worst_case_penalty_check(specs, [space.base], space.base).details["lp_inf"].is_zero


def test_worst_case_penalty_point_mass():
    from riskcomb import FiniteProbSpace
    sp = FiniteProbSpace.uniform(5)
    rep = worst_case_penalty_check([ES(0.5), ES(0.25)], [sp.base], sp.scenario([1, 0, 0, 0, 0]))
    assert rep.passed and rep.details["membership_inf"].infinite
