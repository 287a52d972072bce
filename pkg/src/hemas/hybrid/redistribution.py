"""Hand the pooled energy of hybrid participants back according to their new fitness."""

from __future__ import annotations

import enum
import math


class Scheme(enum.Enum):
    PROPORTIONAL = "proportional"
    RANKING = "ranking"
    TOURNAMENT = "tournament"


class EmptyParticipants(ValueError):
    pass


class NonFiniteFitness(ValueError):
    pass


def proportional_weights(fitnesses: list[float]) -> list[float]:
    """Weight (f_max - f_i + eps) / sum_j (f_max - f_j + eps) for minimisation."""
    worst = max(fitnesses)
    eps = 1e-9 * (1.0 + abs(worst))
    raw = [worst - fi + eps for fi in fitnesses]
    total = math.fsum(raw)
    return [r / total for r in raw]


def redistribute_energy(
    participants: list[tuple[int, float]], pool: float, scheme: Scheme | str = Scheme.PROPORTIONAL
) -> dict[int, float]:
    scheme = Scheme(scheme)
    if not participants:
        raise EmptyParticipants("no participants to redistribute energy to")
    fits = [float(fi) for _, fi in participants]
    if not all(math.isfinite(fi) for fi in fits):
        raise NonFiniteFitness("participant fitness must be finite")
    if scheme is not Scheme.PROPORTIONAL:
        raise NotImplementedError(f"{scheme.value} redistribution is not implemented")
    shares = [pool * w for w in proportional_weights(fits)]
    # push the rounding residue onto the largest share so the pool is preserved
    top = max(range(len(shares)), key=shares.__getitem__)
    shares[top] += pool - math.fsum(shares)
    return {pid: s for (pid, _), s in zip(participants, shares)}
