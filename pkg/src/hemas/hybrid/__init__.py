"""Hybrid layer: trigger rules, embedded PSO/GA operators and energy redistribution."""

from .ga import GaParams, run_ga
from .pso import PsoParams, TooFewParticipants, run_pso
from .redistribution import EmptyParticipants, NonFiniteFitness, Scheme, redistribute_energy
from .rules import (
    Metric,
    Relation,
    RuleSpec,
    RuleSyntaxError,
    Scope,
    Statistic,
    diversity,
    evaluate_rule,
    parse_rule,
    quartile,
)
from .step import ALGORITHMS, HybridConfig, HybridOperatorSpec, hybridization_step, run_hemas

__all__ = [
    "ALGORITHMS",
    "EmptyParticipants",
    "GaParams",
    "HybridConfig",
    "HybridOperatorSpec",
    "Metric",
    "NonFiniteFitness",
    "PsoParams",
    "Relation",
    "RuleSpec",
    "RuleSyntaxError",
    "Scheme",
    "Scope",
    "Statistic",
    "TooFewParticipants",
    "diversity",
    "evaluate_rule",
    "hybridization_step",
    "parse_rule",
    "quartile",
    "redistribute_energy",
    "run_ga",
    "run_hemas",
    "run_pso",
]
