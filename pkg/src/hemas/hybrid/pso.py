"""Global-best particle swarm run on the genotypes of participating agents."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..benchmarks import ObjectiveFunction, EvalBudget


class TooFewParticipants(ValueError):
    pass


@dataclass(frozen=True)
class PsoParams:
    inertia: float = 0.7298
    cognitive: float = 1.49618
    social: float = 1.49618
    # velocity limit as a fraction of the box width
    velocity_clamp: float = 1.0


def run_pso(
    participants,
    f: ObjectiveFunction,
    budget: EvalBudget,
    rng: np.random.Generator,
    max_cycles: int = 3,
    params: PsoParams = PsoParams(),
) -> list[tuple[int, np.ndarray, float]]:
    """Swarm of one particle per participant, started at rest on their genotypes.

    ``participants`` holds ``(id, genotype, fitness)`` triples with cached fitness.
    Each particle's personal best is returned, so no participant gets worse. Cycles
    stop early once the budget is spent.
    """
    if len(participants) < 2:
        raise TooFewParticipants(f"PSO needs at least 2 particles, got {len(participants)}")
    lo, hi = f.bounds
    ids = [p[0] for p in participants]
    x = np.array([p[1] for p in participants], dtype=float)
    pbest = x.copy()
    pbest_fit = np.array([p[2] for p in participants], dtype=float)
    v = np.zeros_like(x)
    vmax = params.velocity_clamp * (hi - lo)
    g = int(np.argmin(pbest_fit))
    gbest = pbest[g].copy()
    k, n = x.shape

    for _ in range(max_cycles):
        if budget.exhausted:
            break
        r1 = rng.random((k, n))
        r2 = rng.random((k, n))
        v = (
            params.inertia * v
            + params.cognitive * r1 * (pbest - x)
            + params.social * r2 * (gbest - x)
        )
        np.clip(v, -vmax, vmax, out=v)
        x = np.clip(x + v, lo, hi)
        for i in range(k):
            if budget.exhausted:
                break
            fit = f.evaluate(x[i], budget)
            if fit < pbest_fit[i]:
                pbest_fit[i] = fit
                pbest[i] = x[i]
        g = int(np.argmin(pbest_fit))
        gbest = pbest[g].copy()

    return [(ids[i], pbest[i].copy(), float(pbest_fit[i])) for i in range(k)]
