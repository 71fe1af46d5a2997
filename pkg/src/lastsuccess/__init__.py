"""Optimal stopping on the last success of independent, weighted Bernoulli trials."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    EPS_CMP,
    ExtendedReal,
    NumericMode,
    ProblemInstance,
    survival_product,
    validate,
)
from .dp import Decision, DpSolution, advise, e_stop, solve  # noqa: E402
from .monotonicity import (  # noqa: E402
    Certificate,
    MonotonicityVerdict,
    certify,
    ebar_keep,
    sign_changes,
    sufficient_condition,
)
from .montecarlo import SimulationResult, simulate  # noqa: E402
from .odds import OddsResult, classic_odds, odds_index, odds_value, solve_odds  # noqa: E402
from .oracle import (  # noqa: E402
    StopSetEvaluation,
    brute_force_optimal,
    evaluate_stop_set,
    path_enumeration_value,
)

__all__ = [
    "EPS_CMP",
    "Certificate",
    "Decision",
    "DpSolution",
    "ExtendedReal",
    "MonotonicityVerdict",
    "NumericMode",
    "OddsResult",
    "ProblemInstance",
    "SimulationResult",
    "StopSetEvaluation",
    "advise",
    "brute_force_optimal",
    "certify",
    "classic_odds",
    "e_stop",
    "ebar_keep",
    "evaluate_stop_set",
    "odds_index",
    "odds_value",
    "path_enumeration_value",
    "sign_changes",
    "simulate",
    "solve",
    "solve_odds",
    "sufficient_condition",
    "survival_product",
    "validate",
]
