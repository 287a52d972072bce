"""Evolutionary multi-agent system: energy-driven selection without a central selector.

One step of the main loop is meet -> reproduce -> die (-> optional hybrid hook)
-> update global best -> record progress, repeated until the evaluation budget is spent.
Total energy in the population is conserved by every step.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .benchmarks import BudgetExhausted, EvalBudget, ObjectiveFunction
from .variation import (
    MutationParams,
    SbxParams,
    polynomial_mutation,
    sbx_crossover,
    strong_mutation,
)

log = logging.getLogger(__name__)


@dataclass(eq=False)
class Agent:
    id: int
    genotype: np.ndarray
    fitness: float
    energy: float


@dataclass
class EmasParams:
    population_size: int = 50
    total_energy: float = 500.0
    initial_energy: float = 10.0
    meet_transfer: float = 1.0
    death_threshold: float = 0.0
    reproduction_threshold: float = 20.0
    crossover: SbxParams = field(default_factory=lambda: SbxParams(5.0, 1.0))
    mutation: MutationParams = field(default_factory=lambda: MutationParams(10.0, 0.01))
    strong_mutation: MutationParams = field(default_factory=lambda: MutationParams(20.0, 1.0))
    # steps without any evaluation before a run is declared stuck
    stall_limit: int = 100_000

    def __post_init__(self):
        if self.population_size < 1:
            raise ValueError("population_size must be >= 1")
        if not np.isclose(self.population_size * self.initial_energy, self.total_energy):
            raise ValueError(
                "population_size * initial_energy must equal total_energy "
                f"({self.population_size} * {self.initial_energy} != {self.total_energy})"
            )
        if self.meet_transfer <= 0:
            raise ValueError("meet_transfer must be positive")
        if self.reproduction_threshold <= self.death_threshold:
            raise ValueError("reproduction_threshold must exceed death_threshold")

    @property
    def child_energy(self) -> float:
        return self.initial_energy


class Population:
    def __init__(self, agents: list[Agent], total_energy: float):
        self.agents = agents
        self.total_energy = total_energy

    def __len__(self) -> int:
        return len(self.agents)

    def __iter__(self):
        return iter(self.agents)

    def energy_sum(self) -> float:
        return float(sum(a.energy for a in self.agents))

    def energies(self) -> np.ndarray:
        return np.array([a.energy for a in self.agents])

    def fitnesses(self) -> np.ndarray:
        return np.array([a.fitness for a in self.agents])

    def genotypes(self) -> np.ndarray:
        return np.stack([a.genotype for a in self.agents])

    def by_id(self) -> dict[int, Agent]:
        return {a.id: a for a in self.agents}

    def best(self) -> Agent:
        return min(self.agents, key=lambda a: a.fitness)


@dataclass
class RunState:
    population: Population
    budget: EvalBudget
    best_genotype: np.ndarray
    best_fitness: float
    step_index: int = 0
    next_id: int = 0
    trajectory: list[tuple[int, float]] = field(default_factory=list)
    trigger_log: list[tuple[int, str, int]] = field(default_factory=list)
    idle_steps: int = 0

    def new_id(self) -> int:
        i = self.next_id
        self.next_id += 1
        return i


@dataclass
class RunRecord:
    trajectory: list[tuple[int, float]]
    final_best_fitness: float
    best_genotype: np.ndarray
    evaluations: int
    steps: int
    final_population_size: int
    final_energy: float
    hybrid_trigger_log: list[tuple[int, str, int]] = field(default_factory=list)
    run_index: int = 0
    seed: int = 0
    fingerprint: str = ""


def create_initial_population(
    params: EmasParams, f: ObjectiveFunction, budget: EvalBudget, rng: np.random.Generator
) -> RunState:
    if budget.remaining < params.population_size:
        raise BudgetExhausted(
            f"budget of {budget.remaining} cannot cover {params.population_size} initial evaluations"
        )
    lo, hi = f.bounds
    genotypes = rng.uniform(lo, hi, size=(params.population_size, f.dimension))
    agents = [
        Agent(i, g, f.evaluate(g, budget), params.initial_energy) for i, g in enumerate(genotypes)
    ]
    pop = Population(agents, params.total_energy)
    best = pop.best()
    state = RunState(pop, budget, best.genotype.copy(), best.fitness, next_id=len(agents))
    state.trajectory.append((budget.used, best.fitness))
    return state


def meet_step(state: RunState, params: EmasParams, rng: np.random.Generator) -> float:
    """Random pairwise meetings; the fitter agent takes energy from the other.

    Returns the total amount of energy moved.
    """
    agents = state.population.agents
    order = rng.permutation(len(agents))
    moved = 0.0
    for k in range(0, len(order) - 1, 2):
        a, b = agents[order[k]], agents[order[k + 1]]
        if a.fitness < b.fitness:
            winner, loser = a, b
        elif b.fitness < a.fitness:
            winner, loser = b, a
        else:
            continue
        amount = min(params.meet_transfer, loser.energy)
        loser.energy -= amount
        winner.energy += amount
        moved += amount
    return moved


def repro_step(
    state: RunState, params: EmasParams, f: ObjectiveFunction, rng: np.random.Generator
) -> int:
    """Agents at or above the reproduction threshold produce one child per pair.

    A leftover eligible agent clones itself through strong mutation. Returns the number
    of children created.
    """
    pop = state.population
    eligible = [a for a in pop.agents if a.energy >= params.reproduction_threshold]
    if not eligible:
        return 0
    order = rng.permutation(len(eligible))
    bounds = f.bounds
    share = params.child_energy / 2.0
    children = []
    for k in range(0, len(order), 2):
        if state.budget.exhausted:
            break
        if k + 1 < len(order):
            p1, p2 = eligible[order[k]], eligible[order[k + 1]]
            g, _ = sbx_crossover(p1.genotype, p2.genotype, params.crossover, bounds, rng)
            g = polynomial_mutation(g, params.mutation, bounds, rng)
            fit = f.evaluate(g, state.budget)
            p1.energy -= share
            p2.energy -= share
        else:
            p1 = eligible[order[k]]
            g = polynomial_mutation(p1.genotype, params.strong_mutation, bounds, rng)
            fit = f.evaluate(g, state.budget)
            p1.energy -= params.child_energy
        children.append(Agent(state.new_id(), g, fit, params.child_energy))
    pop.agents.extend(children)
    return len(children)


def dead_step(state: RunState, params: EmasParams) -> int:
    """Remove agents whose energy fell to the death threshold; never empties the population."""
    pop = state.population
    alive = [a for a in pop.agents if a.energy > params.death_threshold]
    removed = len(pop.agents) - len(alive)
    if not alive:
        alive = [pop.best()]
        removed -= 1
    if removed:
        pop.agents = alive
    return removed


def update_best(state: RunState) -> bool:
    best = state.population.best()
    if best.fitness < state.best_fitness:
        state.best_fitness = best.fitness
        state.best_genotype = best.genotype.copy()
        return True
    return False


def record_progress(state: RunState) -> None:
    if state.budget.used > state.trajectory[-1][0]:
        state.trajectory.append((state.budget.used, state.best_fitness))


HybridHook = Callable[[RunState, ObjectiveFunction, np.random.Generator], None]


def run_loop(
    params: EmasParams,
    f: ObjectiveFunction,
    budget: EvalBudget,
    rng: np.random.Generator,
    hybrid: Optional[tuple[int, HybridHook]] = None,
    on_step: Optional[Callable[[RunState], None]] = None,
) -> RunRecord:
    """Main loop shared by plain and hybrid runs.

    ``hybrid`` is ``(period, hook)``; the hook runs after the death step on every
    step index that is a positive multiple of ``period``.
    """
    state = create_initial_population(params, f, budget, rng)
    while not budget.exhausted:
        state.step_index += 1
        used_before = budget.used
        meet_step(state, params, rng)
        repro_step(state, params, f, rng)
        dead_step(state, params)
        if hybrid is not None and state.step_index % hybrid[0] == 0:
            hybrid[1](state, f, rng)
        update_best(state)
        record_progress(state)
        if on_step is not None:
            on_step(state)
        if budget.used == used_before:
            state.idle_steps += 1
            if state.idle_steps >= params.stall_limit:
                raise RuntimeError(
                    f"run stalled: no evaluation in {params.stall_limit} consecutive steps "
                    f"({budget.used}/{budget.limit} evaluations used)"
                )
        else:
            state.idle_steps = 0
    log.debug("run finished after %d steps, best %.6g", state.step_index, state.best_fitness)
    return RunRecord(
        trajectory=state.trajectory,
        final_best_fitness=state.best_fitness,
        best_genotype=state.best_genotype,
        evaluations=budget.used,
        steps=state.step_index,
        final_population_size=len(state.population),
        final_energy=state.population.energy_sum(),
        hybrid_trigger_log=state.trigger_log,
    )


def run_emas(
    params: EmasParams,
    f: ObjectiveFunction,
    budget: EvalBudget,
    rng: np.random.Generator,
    on_step: Optional[Callable[[RunState], None]] = None,
) -> RunRecord:
    return run_loop(params, f, budget, rng, on_step=on_step)
