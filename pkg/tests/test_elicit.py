import pytest

from riskcomb import FiniteProbSpace, Pinball, ScoringFunction, SquaredError, elicit, worst_case_elicitation
from riskcomb.elicit import elicit_numeric, elicit_worst_case, es_tail_check, expected_score, has_tail_tie


def test_expected_scores(space, X):
    assert expected_score(SquaredError(), X, space.base, -2.5) == pytest.approx(31.25)
    assert expected_score(Pinball(0.25), X, space.base, -10) == pytest.approx(1.875)
    c = space.position([2, 2, 2, 2])
    assert expected_score(SquaredError(), c, space.base, 2) == 0
    assert expected_score(Pinball(0.3), c, space.base, 2) == 0


def test_closed_forms(space, X, q2):
    assert elicit(SquaredError(), X, q2) == pytest.approx(5.0)
    assert elicit(Pinball(0.25), X, space.base) == 10
    c = space.position([2, 2, 2, 2])
    assert elicit(SquaredError(), c) == pytest.approx(-2)
    assert elicit(Pinball(0.25), c) == -2


def test_numeric_matches_closed(space, X, q2):
    for S in (SquaredError(), Pinball(0.25), Pinball(0.6)):
        for Q in (space.base, q2):
            r = 15 / 1e6
            assert elicit_numeric(S, X, Q) == pytest.approx(elicit(S, X, Q), abs=r)


def test_worked_example(space, X, q2):
    wc = worst_case_elicitation(SquaredError(), X, [space.base, q2])
    assert wc.agrees
    assert wc.value == pytest.approx(5.0, abs=2 * wc.resolution)
    assert wc.argmin == pytest.approx(-5.0, abs=2 * wc.resolution)


def test_singleton_worst_case(space, X):
    v = elicit_worst_case(SquaredError(), X, [space.base])
    assert v == pytest.approx(2.5, abs=3e-5)


def test_pinball_two_scenarios(space, X, q2):
    wc = worst_case_elicitation(Pinball(0.25), X, [space.base, q2])
    assert wc.agrees and wc.value == pytest.approx(10, abs=2 * wc.resolution)


def test_worst_case_gap():
    # the worst-case objective picks the smaller-variance scenario, not the riskier one
    sp = FiniteProbSpace.uniform(2)
    X = sp.position([0.0, 10.0])
    wc = worst_case_elicitation(SquaredError(), X, [sp.scenario([0.5, 0.5]), sp.scenario([0.1, 0.9])])
    assert wc.target == pytest.approx(-5)
    assert wc.value == pytest.approx(-9, abs=1e-4)
    assert not wc.agrees


def test_es_tail(space, X):
    assert es_tail_check(X, 0.5)["passed"]
    assert has_tail_tie(space.position([1, 1, 2, 3]), 0.3)
    assert not has_tail_tie(X, 0.5)


def test_parse():
    assert ScoringFunction.parse("squared") == SquaredError()
    assert ScoringFunction.parse("pinball:0.25") == Pinball(0.25)
    with pytest.raises(ValueError):
        ScoringFunction.parse("pinball:1.5")
