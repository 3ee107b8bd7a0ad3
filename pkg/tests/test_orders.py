import random

import pytest

from riskcomb import ES, EL, FiniteProbSpace, Mixture, VaR, WorstCase
from riskcomb.combinators import Composed
from riskcomb.orders import OrderKind, dominated_pair, dominates, respects_order

SSD = OrderKind(2, "single")
FSD = OrderKind(1, "single")


def test_second_order_example(space, X):
    Y = space.position([-5, -5, 0, 0])
    assert dominates(Y, X, SSD, [space.base])
    res = dominates(X, Y, SSD, [space.base])
    assert not res and res.level == 0.25


def test_reflexive(space, X, q2):
    for kind in (FSD, SSD):
        assert dominates(X, X, kind, [q2])
    for kind in (OrderKind(1, "set"), OrderKind(2, "set")):
        assert dominates(X, X, kind, [space.base, q2])


def test_law_only():
    sp = FiniteProbSpace.uniform(2)
    X, Y = sp.position([0, 10]), sp.position([10, 0])
    assert dominates(X, Y, FSD, [sp.base]) and dominates(Y, X, FSD, [sp.base])


def test_parse():
    assert OrderKind.parse("2:set") == OrderKind(2, "set")
    assert OrderKind.parse("1") == FSD
    with pytest.raises(ValueError):
        OrderKind.parse("3")


def test_empty_scenarios(space, X):
    with pytest.raises(ValueError):
        dominates(X, X, FSD, [])


def test_set_scope_names_scenario(space, X, q2):
    Y = space.position([-10, -5, 0, 6])
    res = dominates(X, Y, OrderKind(1, "set"), [space.base, q2])
    assert not res and res.scenario == 0


def test_es_on_pair(space, X):
    Y = space.position([-5, -5, 0, 0])
    rho = Composed.build(Mixture((1,)), [ES(0.5)], [space.base])
    assert rho(Y) == pytest.approx(5) and rho(X) == pytest.approx(7.5)


def test_uniform_first_order_oracle():
    rng = random.Random(3)
    sp = FiniteProbSpace.uniform(5)
    for _ in range(300):
        a = [rng.randint(-3, 3) for _ in range(5)]
        b = [rng.randint(-3, 3) for _ in range(5)]
        oracle = all(x >= y for x, y in zip(sorted(a), sorted(b)))
        assert bool(dominates(sp.position(a), sp.position(b), FSD, [sp.base])) == oracle


def test_generated_pairs_dominate(space, q2):
    rng = random.Random(0)
    for degree in (1, 2):
        for _ in range(200):
            X, Y = dominated_pair(rng, space, [space.base, q2], degree)
            assert dominates(X, Y, OrderKind(degree, "set"), [space.base, q2])


def test_respects(space, q2):
    rho = Composed.build(Mixture((0.5, 0.5)), [ES(0.5), ES(0.25)], [space.base, q2])
    assert respects_order(rho, OrderKind(2, "set"), [space.base, q2], trials=1000).passed
    rho = Composed.build(WorstCase(), [VaR(0.25), VaR(0.5)], [space.base, q2])
    assert respects_order(rho, OrderKind(1, "set"), [space.base, q2], trials=1000).passed


def test_translation_respected(space):
    rho = Composed.build(WorstCase(), [EL(), ES(0.5)], [space.base])
    X = space.position([1, -2, 4, 0])
    Y = X - space.position([0.5] * 4)
    assert dominates(X, Y, FSD, [space.base]) and rho(X) <= rho(Y)
