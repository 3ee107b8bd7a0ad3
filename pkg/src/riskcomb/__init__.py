"""Combining risk measures across scenarios on finite probability spaces."""

from .prob_core import (
    DimensionError,
    Distribution,
    FiniteProbSpace,
    Position,
    ScenarioMeasure,
    distribution,
    integrated_quantile,
    is_comonotone,
    mix_scenarios,
    quantile,
)
from .measures import (
    EL,
    ES,
    ML,
    ESMixture,
    RiskMeasureSpec,
    RiskProfile,
    SpecError,
    Spectral,
    VaR,
    evaluate,
    profile,
)
from .combinators import (
    CombinationSpec,
    Composed,
    Mixture,
    UtilityOfProfile,
    WorstCase,
    check_f_axiom,
    check_rho_axiom,
    combine,
    compose,
)
from .lp import LPResult, enumerate_vertices, solve_lp
from .duality import (
    DualSetSpec,
    PenaltyValue,
    composed_dual_check,
    dual_evaluate,
    dual_evaluate_lp,
    gamma_f,
    hull_lp,
    min_penalty,
)
from .kusuoka import kusuoka_measure, law_invariant_composed_check, m_from_phi, phi_from_m
from .orders import OrderKind, dominates
from .elicit import Pinball, ScoringFunction, SquaredError, elicit, worst_case_elicitation

__version__ = "0.1.0"
