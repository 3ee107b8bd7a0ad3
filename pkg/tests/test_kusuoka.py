from fractions import Fraction as F

import pytest

from riskcomb import EL, ES, ESMixture, Mixture, Spectral, WorstCase, evaluate
from riskcomb.kusuoka import (
    DomainError,
    beta_penalty,
    es_mixture_evaluate,
    kusuoka_measure,
    law_invariant_composed_check,
    m_from_phi,
    mixed_measure,
    mixed_scenario_values,
    mixture_spectrum,
    phi_from_m,
)

HALF = ESMixture(((F(1, 2), 1),))
QUARTER = ESMixture(((F(1, 4), 1),))
BOTH = ESMixture(((F(1, 4), F(1, 2)), (F(1, 2), F(1, 2))))
STEP = Spectral(((0, 3), (F(1, 4), 1), (F(1, 2), 0)))


def test_phi_from_m():
    assert phi_from_m(HALF) == Spectral(((0, 2), (F(1, 2), 0)))
    assert phi_from_m(ESMixture(((1, 1),))) == Spectral(((0, 1),))
    assert phi_from_m(BOTH) == STEP


def test_m_from_phi():
    assert m_from_phi(Spectral(((0, 2), (F(1, 2), 0)))) == HALF
    assert m_from_phi(Spectral(((0, 1),))) == ESMixture(((1, 1),))
    assert m_from_phi(STEP) == BOTH


def test_increasing_spectrum_rejected():
    with pytest.raises(DomainError):
        m_from_phi(Spectral(((0, F(1, 2)), (F(1, 2), F(3, 2)))))


def test_es_mixture_values(exact_space):
    X = exact_space.position([-10, -5, 0, 5])
    assert es_mixture_evaluate(HALF, X) == F(15, 2)
    assert es_mixture_evaluate(ESMixture(((1, 1),)), X) == F(5, 2)
    assert es_mixture_evaluate(BOTH, X) == F(35, 4)
    assert evaluate(STEP, X) == F(35, 4)


def test_mixture_spectrum():
    a, b = phi_from_m(HALF), phi_from_m(QUARTER)
    assert mixture_spectrum([a, b], [F(1, 2), F(1, 2)]) == STEP
    assert mixture_spectrum([a, b], [1, 0]) == a
    assert mixture_spectrum([a, a], [F(1, 3), F(2, 3)]) == a


def test_kusuoka_measure():
    assert kusuoka_measure(EL()) == ESMixture(((1, 1),))
    assert kusuoka_measure(ES(F(1, 2))) == HALF
    assert kusuoka_measure(STEP) == BOTH


def test_beta_penalty():
    assert beta_penalty([HALF, QUARTER], (F(1, 2), F(1, 2)), BOTH).is_zero
    assert beta_penalty([HALF, QUARTER], (F(1, 2), F(1, 2)), HALF).infinite
    assert beta_penalty([HALF, QUARTER], (1, 0), HALF).is_zero


def test_mixing_commutes(exact_space):
    X = exact_space.position([-7, 2, 3, -1])
    mu = (F(1, 3), F(2, 3))
    lhs = sum(w * evaluate(m, X) for w, m in zip(mu, (HALF, BOTH)))
    assert lhs == evaluate(mixed_measure([HALF, BOTH], mu), X)


def test_composed_mixture(space, X, q2):
    rep = law_invariant_composed_check(Mixture((0.5, 0.5)), [ES(0.5)], [space.base, q2], X)
    assert rep.passed
    assert rep.details["lhs"] == pytest.approx(8.25)
    assert rep.details["rhs_admissible"] == pytest.approx(8.25)


def test_composed_point_mass(space, X):
    rep = law_invariant_composed_check(Mixture((1,)), [ES(0.5)], [space.base], X)
    assert rep.passed and rep.details["lhs"] == pytest.approx(7.5)


def test_composed_worst_case(space, X, q2):
    rep = law_invariant_composed_check(WorstCase(), [ES(0.5)], [space.base, q2], X)
    assert rep.passed
    assert rep.details["lhs"] == pytest.approx(9)
    assert rep.details["rhs_grid"] >= 9


def test_mixed_scenario_inequality(space, X, q2):
    mixed, averaged = mixed_scenario_values(ES(0.5), X, [space.base, q2], (0.5, 0.5))
    assert mixed >= averaged - 1e-12
    mixed, averaged = mixed_scenario_values(EL(), X, [space.base, q2], (0.5, 0.5))
    assert mixed == pytest.approx(averaged, abs=1e-12)
