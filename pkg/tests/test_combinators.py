import pytest

from riskcomb import (
    EL, ES, ML, VaR, Composed, Mixture, RiskProfile, UtilityOfProfile, WorstCase,
    check_f_axiom, check_rho_axiom, combine, compose,
)
from riskcomb.combinators import CombinationSpec, lipschitz_check
from riskcomb.measures import SpecError


def test_combine_closed_forms():
    assert combine(WorstCase(), RiskProfile((2.5, 7.5, 10))) == 10
    assert combine(Mixture((0.5, 0.5)), RiskProfile((2.5, 7.5))) == pytest.approx(5.0)
    assert combine(UtilityOfProfile(ML(), (1 / 3, 1 / 3, 1 / 3)), RiskProfile((2.5, 7.5, 10))) == 10
    assert combine(UtilityOfProfile(EL(), (0.5, 0.5)), RiskProfile((2.0, 4.0))) == pytest.approx(3.0)


def test_utility_var_and_es():
    R = RiskProfile((1.0, 2.0, 3.0, 4.0))
    mu = (0.25,) * 4
    # VaR utility is the inf-quantile of the profile at 1 - alpha; ES averages the top
    assert combine(UtilityOfProfile(VaR(0.25), mu), R) == pytest.approx(3.0)
    assert combine(UtilityOfProfile(ES(0.5), mu), R) == pytest.approx(3.5)


def test_normalization():
    for f in (WorstCase(), Mixture((0.3, 0.7)), UtilityOfProfile(ES(0.5), (0.5, 0.5))):
        assert combine(f, RiskProfile((0, 0))) == 0


def test_bad_weights():
    with pytest.raises((SpecError, ValueError)):
        Mixture((0.5, 0.6))
    with pytest.raises((SpecError, ValueError)):
        combine(Mixture((0.5, 0.5)), RiskProfile((1, 2, 3)))


def test_compose(space, X):
    assert compose(WorstCase(), [EL(), ES(0.5), VaR(0.25)], [space.base], X) == 10
    assert compose(Mixture((0.5, 0.5)), [ES(0.5), ES(0.25)], [space.base], X) == pytest.approx(8.75)
    zero = space.position([0, 0, 0, 0])
    assert compose(Mixture((0.5, 0.5)), [ES(0.5), ES(0.25)], [space.base], zero) == 0


def test_from_dict():
    assert CombinationSpec.from_dict({"kind": "WorstCase"}) == WorstCase()
    assert CombinationSpec.from_dict({"kind": "Mixture", "weights": [0.5, 0.5]}) == Mixture((0.5, 0.5))
    with pytest.raises(SpecError):
        CombinationSpec.from_dict({"kind": "Median"})


def test_worst_case_not_additive():
    rep = check_f_axiom(WorstCase(), "Additivity", seed=0, trials=2000)
    assert not rep.passed
    assert rep.witness


@pytest.mark.parametrize("axiom", ["Monotonicity", "TranslationInvariance", "PositiveHomogeneity",
                                   "Convexity", "Additivity", "Boundedness"])
def test_mixture_f_axioms(axiom):
    assert check_f_axiom(Mixture((0.2, 0.3, 0.5)), axiom, seed=1, trials=2000).passed


def test_worst_case_convex():
    assert check_f_axiom(WorstCase(), "Convexity", seed=0, trials=2000, dim=3).passed


def test_rho_convexity_inherited(space, q2):
    rho = Composed.build(WorstCase(), [ES(0.5), ML()], [space.base, q2])
    assert check_rho_axiom(rho, "Convexity", seed=0, trials=2000).passed


def test_mixture_comonotone_additive(space):
    rho = Composed.build(Mixture((0.5, 0.5)), [ES(0.5), ES(0.25)], [space.base])
    assert check_rho_axiom(rho, "ComonotonicAdditivity", seed=0, trials=2000).passed


def test_var_convexity_counterexample():
    from riskcomb import FiniteProbSpace
    sp = FiniteProbSpace.uniform(4)
    rho = Composed.build(WorstCase(), [VaR(0.5)], [sp.base])
    rep = check_rho_axiom(rho, "Convexity", seed=0, trials=10_000)
    assert not rep.passed and rep.witness


def test_lipschitz(space, q2):
    rho = Composed.build(WorstCase(), [EL(), ES(0.5)], [space.base, q2])
    assert lipschitz_check(rho, seed=0, trials=2000).passed
    rho = Composed.build(Mixture((0.5, 0.5)), [VaR(0.25)], [space.base, q2])
    assert lipschitz_check(rho, seed=0, trials=2000).passed
