"""Generational genetic algorithm used as a hybrid operator."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..benchmarks import EvalBudget, ObjectiveFunction
from ..variation import MutationParams, SbxParams, polynomial_mutation, sbx_crossover
from .pso import TooFewParticipants


@dataclass(frozen=True)
class GaParams:
    crossover: SbxParams = SbxParams(20.0, 0.9)
    mutation_index: float = 20.0
    # None means 1 / genotype length
    mutation_probability: Optional[float] = None


def _tournament(fit: np.ndarray, rng: np.random.Generator) -> int:
    i, j = rng.integers(fit.shape[0], size=2)
    return int(i) if fit[i] <= fit[j] else int(j)


def run_ga(
    participants,
    f: ObjectiveFunction,
    budget: EvalBudget,
    rng: np.random.Generator,
    max_cycles: int = 3,
    params: GaParams = GaParams(),
) -> list[tuple[int, np.ndarray, float]]:
    """Run up to ``max_cycles`` generations seeded with the participants' genotypes.

    Offspring replace the population except that the best parent survives in place
    of the worst child. The final population is handed back rank for rank: the best
    solution goes to the id that entered with the best fitness, and so on.
    """
    if len(participants) < 2:
        raise TooFewParticipants(f"GA needs at least 2 individuals, got {len(participants)}")
    bounds = f.bounds
    pop = np.array([p[1] for p in participants], dtype=float)
    fit = np.array([p[2] for p in participants], dtype=float)
    k, n = pop.shape
    pm = params.mutation_probability
    mutation = MutationParams(params.mutation_index, 1.0 / n if pm is None else pm)

    for _ in range(max_cycles):
        if budget.exhausted:
            break
        kids, kid_fit = [], []
        while len(kids) < k and not budget.exhausted:
            a = _tournament(fit, rng)
            b = _tournament(fit, rng)
            c1, c2 = sbx_crossover(pop[a], pop[b], params.crossover, bounds, rng)
            for c in (c1, c2):
                if len(kids) == k or budget.exhausted:
                    break
                c = polynomial_mutation(c, mutation, bounds, rng)
                kids.append(c)
                kid_fit.append(f.evaluate(c, budget))
        kid_fit = np.array(kid_fit)
        # a generation cut short by the budget is topped up with the best parents
        order = np.argsort(fit, kind="stable")
        fill = order[: k - len(kids)]
        new_pop = np.vstack([np.array(kids).reshape(-1, n), pop[fill]])
        new_fit = np.concatenate([kid_fit, fit[fill]])
        best_parent = order[0]
        worst_kid = int(np.argmax(new_fit))
        if fit[best_parent] < new_fit.min():
            new_pop[worst_kid] = pop[best_parent]
            new_fit[worst_kid] = fit[best_parent]
        pop, fit = new_pop, new_fit

    ids_by_rank = [participants[i][0] for i in np.argsort([p[2] for p in participants], kind="stable")]
    ranked = np.argsort(fit, kind="stable")
    return [(ids_by_rank[r], pop[i].copy(), float(fit[i])) for r, i in enumerate(ranked)]
