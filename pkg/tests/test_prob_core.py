import pytest

from riskcomb import FiniteProbSpace, distribution, is_comonotone, mix_scenarios, quantile
from riskcomb.prob_core import DimensionError, integrated_quantile


def test_distribution_uniform(space, X):
    assert distribution(X, space.base).atoms == ((-10, 0.25), (-5, 0.5), (0, 0.75), (5, 1.0))


def test_distribution_constant(space):
    F = distribution(space.position([1, 1, 1, 1]), space.scenario([0.1, 0.2, 0.3, 0.4]))
    assert len(F.atoms) == 1
    assert F.atoms[0][0] == 1 and F.atoms[0][1] == pytest.approx(1.0)


def test_distribution_skewed(X, q2):
    got = distribution(X, q2).atoms
    assert [v for v, _ in got] == [-10, -5, 0, 5]
    assert [c for _, c in got] == pytest.approx([0.4, 0.7, 0.9, 1.0])


def test_exact_cumulative(exact_space, q2_exact):
    X = exact_space.position([-10, -5, 0, 5])
    assert [c for _, c in distribution(X, q2_exact).atoms][-1] == 1


@pytest.mark.parametrize("alpha, expected", [(0.25, -10), (0.26, -5), (0, -10), (1, 5), (0.75, 0)])
def test_inf_quantile(space, X, alpha, expected):
    assert quantile(distribution(X, space.base), alpha) == expected


def test_quantile_domain(space, X):
    with pytest.raises(ValueError):
        quantile(distribution(X, space.base), 1.5)


def test_integrated_quantile(space, X):
    F = distribution(X, space.base)
    assert integrated_quantile(F, 0.5) == pytest.approx(-3.75)
    assert integrated_quantile(F, 1) == pytest.approx(-2.5)


def test_comonotone(space, X):
    assert is_comonotone(X, space.position([-1, 0, 0, 3]))
    assert not is_comonotone(X, space.position([5, 0, -5, -10]))
    assert is_comonotone(space.position([1, 1, 1, 1]), X)


def test_dimension_mismatch(space):
    with pytest.raises(DimensionError):
        space.position([1, 2, 3])
    with pytest.raises(ValueError):
        FiniteProbSpace(("a", "b"), (0.5, 0.6))


def test_mix_scenarios(space, q2):
    Q = mix_scenarios([space.base, q2], [0.5, 0.5])
    assert Q.probs == pytest.approx((0.325, 0.275, 0.225, 0.175))
