import numpy as np

from hemas.benchmarks import EvalBudget, make_benchmark
from hemas.emas import Agent, Population, RunState


def make_state(specs, dim=2, budget=1000, function="sphere"):
    """RunState over agents given as (genotype, energy) pairs, fitness from the function."""
    f = make_benchmark(function, dim)
    agents = [Agent(i, np.asarray(g, dtype=float), f(g), float(e)) for i, (g, e) in enumerate(specs)]
    total = sum(a.energy for a in agents)
    pop = Population(agents, total)
    best = pop.best()
    state = RunState(pop, EvalBudget(budget), best.genotype.copy(), best.fitness, next_id=len(agents))
    state.trajectory.append((0, best.fitness))
    return state, f

