"""Real-coded variation operators and the random stream contract.

Every operator takes an explicit ``numpy.random.Generator``; there is no global RNG.
Out-of-bounds genes are repaired by clamping to the violated bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .benchmarks import DimensionMismatch

_MASK64 = (1 << 64) - 1


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, run_index: int) -> int:
    """64-bit seed of run ``run_index``; depends only on (master_seed, run_index)."""
    return _splitmix64(_splitmix64(master_seed & _MASK64) ^ (run_index & _MASK64))


def make_rng(seed: int) -> np.random.Generator:
    # Philox is counter-based, so draw sequences are platform independent.
    return np.random.Generator(np.random.Philox(seed & _MASK64))


@dataclass(frozen=True)
class SbxParams:
    distribution_index: float = 5.0
    probability: float = 1.0

    def __post_init__(self):
        if self.distribution_index < 0:
            raise ValueError("distribution_index must be >= 0")
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError("probability must lie in [0, 1]")


@dataclass(frozen=True)
class MutationParams:
    distribution_index: float = 10.0
    probability: float = 0.01

    def __post_init__(self):
        if self.distribution_index < 0:
            raise ValueError("distribution_index must be >= 0")
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError("probability must lie in [0, 1]")


STRONG_MUTATION = MutationParams(20.0, 1.0)


def sbx_spread(u, eta: float):
    """Spread factor beta_q for uniform draws ``u`` in [0, 1)."""
    u = np.asarray(u, dtype=float)
    low = u <= 0.5
    base = np.where(low, 2.0 * u, 0.5 / (1.0 - np.where(low, 0.0, u)))
    return np.power(base, 1.0 / (eta + 1.0))


def sbx_children(p1, p2, u, eta: float):
    """Unclamped SBX children of two gene vectors for given draws ``u``."""
    beta = sbx_spread(u, eta)
    c1 = 0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2)
    c2 = 0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2)
    return c1, c2


def sbx_crossover(p1, p2, params: SbxParams, bounds, rng: np.random.Generator):
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    if p1.shape != p2.shape:
        raise DimensionMismatch(f"parents differ in shape: {p1.shape} vs {p2.shape}")
    lo, hi = bounds
    if rng.random() >= params.probability:
        return p1.copy(), p2.copy()
    n = p1.shape[0]
    gate = rng.random(n) < 0.5
    u = rng.random(n)
    c1, c2 = sbx_children(p1, p2, u, params.distribution_index)
    c1 = np.where(gate, c1, p1)
    c2 = np.where(gate, c2, p2)
    return np.clip(c1, lo, hi), np.clip(c2, lo, hi)


def polynomial_delta(x, u, lo: float, hi: float, eta: float):
    """Bounded polynomial-mutation step delta_q (a fraction of hi - lo)."""
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    span = hi - lo
    low = u < 0.5
    # distance to the bound the step is heading for, as a fraction of the span
    reach = np.where(low, x - lo, hi - x) / span
    edge = np.power(1.0 - reach, eta + 1.0)
    val = np.where(low, 2.0 * u + (1.0 - 2.0 * u) * edge, 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * edge)
    root = np.power(val, 1.0 / (eta + 1.0))
    return np.where(low, root - 1.0, 1.0 - root)


def polynomial_mutation(x, params: MutationParams, bounds, rng: np.random.Generator):
    x = np.asarray(x, dtype=float)
    lo, hi = bounds
    idx = np.flatnonzero(rng.random(x.shape[0]) < params.probability)
    out = x.copy()
    if idx.size == 0:
        return out
    u = rng.random(idx.size)
    delta = polynomial_delta(x[idx], u, lo, hi, params.distribution_index)
    out[idx] = np.clip(x[idx] + delta * (hi - lo), lo, hi)
    return out


def strong_mutation(x, bounds, rng: np.random.Generator):
    """Polynomial mutation applied to every gene (eta=20); breaks up inbred lone parents."""
    return polynomial_mutation(x, STRONG_MUTATION, bounds, rng)
