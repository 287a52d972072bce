"""Periodic hybridization step and the hybrid main loop."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..benchmarks import EvalBudget, ObjectiveFunction
from ..emas import EmasParams, RunRecord, RunState, run_loop
from .ga import run_ga
from .pso import run_pso
from .redistribution import Scheme, redistribute_energy
from .rules import RuleSpec, parse_rule

log = logging.getLogger(__name__)

HybridAlgorithm = Callable[..., list]

# Further operators register here under their own name; each is called as
# algo(participants, f, budget, rng, max_cycles) and returns (id, genotype, fitness).
ALGORITHMS: dict[str, HybridAlgorithm] = {
    "pso": run_pso,
    "ga": run_ga,
}


@dataclass(frozen=True)
class HybridOperatorSpec:
    algorithm: str
    rule: RuleSpec
    min_participants: int = 2
    max_cycles: int = 3

    def __post_init__(self):
        if isinstance(self.rule, str):
            object.__setattr__(self, "rule", parse_rule(self.rule))
        object.__setattr__(self, "algorithm", self.algorithm.lower())
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown hybrid algorithm {self.algorithm!r}")
        if self.min_participants < 2:
            raise ValueError("min_participants must be >= 2 for population-based operators")
        if self.max_cycles < 0:
            raise ValueError("max_cycles must be >= 0")


@dataclass(frozen=True)
class HybridConfig:
    operators: tuple[HybridOperatorSpec, ...] = ()
    period: int = 2000
    redistribution: Scheme = Scheme.PROPORTIONAL

    def __post_init__(self):
        object.__setattr__(self, "operators", tuple(self.operators))
        object.__setattr__(self, "redistribution", Scheme(self.redistribution))
        if self.period < 1:
            raise ValueError("period must be >= 1")


def hybridization_step(
    state: RunState, config: HybridConfig, f: ObjectiveFunction, rng: np.random.Generator
) -> int:
    """Run every operator whose rule recruits enough agents; returns how many ran.

    Participants get the operator's solutions (with the operator's fitness values as
    cache) and then share their pooled energy according to the redistribution scheme.
    """
    fired = 0
    for op in config.operators:
        if state.budget.exhausted:
            break
        ids = op.rule.select(state.population)
        if len(ids) < op.min_participants:
            continue
        agents = state.population.by_id()
        chosen = [agents[i] for i in ids]
        pool = math.fsum(a.energy for a in chosen)
        result = ALGORITHMS[op.algorithm](
            [(a.id, a.genotype, a.fitness) for a in chosen], f, state.budget, rng, op.max_cycles
        )
        for aid, genotype, fitness in result:
            agents[aid].genotype = genotype
            agents[aid].fitness = fitness
        energy = redistribute_energy([(aid, fit) for aid, _, fit in result], pool, config.redistribution)
        for aid, e in energy.items():
            agents[aid].energy = e
        state.trigger_log.append((state.step_index, op.rule.name, len(ids)))
        log.debug("step %d: %s fired %s on %d agents", state.step_index, op.rule.name, op.algorithm, len(ids))
        fired += 1
    return fired


def run_hemas(
    params: EmasParams,
    config: HybridConfig,
    f: ObjectiveFunction,
    budget: EvalBudget,
    rng: np.random.Generator,
    on_step: Optional[Callable[[RunState], None]] = None,
) -> RunRecord:
    def hook(state: RunState, f: ObjectiveFunction, rng: np.random.Generator) -> None:
        hybridization_step(state, config, f, rng)

    return run_loop(params, f, budget, rng, hybrid=(config.period, hook), on_step=on_step)
