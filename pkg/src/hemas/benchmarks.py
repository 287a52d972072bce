"""Continuous benchmark functions and the evaluation budget used as stopping criterion.

All four functions have their global minimum 0.0 at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np


class BudgetExhausted(RuntimeError):
    """Raised when an evaluation is requested after the budget has been spent."""


class DimensionMismatch(ValueError):
    pass


class OutOfBounds(ValueError):
    pass


class UnknownFunction(ValueError):
    pass


def sphere(x: np.ndarray) -> float:
    return float(np.dot(x, x))


def ackley(x: np.ndarray) -> float:
    n = x.shape[0]
    a = -20.0 * math.exp(-0.2 * math.sqrt(float(np.dot(x, x)) / n))
    b = -math.exp(float(np.sum(np.cos(2.0 * np.pi * x))) / n)
    return a + b + 20.0 + math.e


def griewank(x: np.ndarray) -> float:
    idx = np.sqrt(np.arange(1, x.shape[0] + 1, dtype=float))
    return float(1.0 + np.dot(x, x) / 4000.0 - np.prod(np.cos(x / idx)))


def rastrigin(x: np.ndarray) -> float:
    n = x.shape[0]
    return float(10.0 * n + np.dot(x, x) - 10.0 * np.sum(np.cos(2.0 * np.pi * x)))


# name -> (evaluator, half-width of the symmetric box domain)
_FUNCTIONS: dict[str, tuple[Callable[[np.ndarray], float], float]] = {
    "sphere": (sphere, 5.12),
    "ackley": (ackley, 32.768),
    "griewank": (griewank, 600.0),
    "rastrigin": (rastrigin, 5.12),
}

FUNCTION_NAMES = tuple(_FUNCTIONS)


@dataclass(frozen=True)
class ObjectiveFunction:
    name: str
    dimension: int
    lower_bound: float
    upper_bound: float
    evaluator: Callable[[np.ndarray], float] = field(repr=False, compare=False)

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if not self.lower_bound < self.upper_bound:
            raise ValueError("lower_bound must be < upper_bound")

    @property
    def bounds(self) -> tuple[float, float]:
        return self.lower_bound, self.upper_bound

    def __call__(self, x) -> float:
        """Evaluate without touching any budget (used for checks and oracles)."""
        return self.evaluator(np.asarray(x, dtype=float))

    def check(self, x: np.ndarray) -> None:
        if x.ndim != 1 or x.shape[0] != self.dimension:
            raise DimensionMismatch(
                f"{self.name}: expected a vector of length {self.dimension}, got shape {x.shape}"
            )
        if not (self.lower_bound <= x.min() and x.max() <= self.upper_bound):
            raise OutOfBounds(
                f"{self.name}: genotype leaves [{self.lower_bound}, {self.upper_bound}]"
            )

    def evaluate(self, x, budget: "EvalBudget") -> float:
        x = np.asarray(x, dtype=float)
        self.check(x)
        budget.consume()
        return self.evaluator(x)


@dataclass
class EvalBudget:
    limit: int
    used: int = 0

    def __post_init__(self):
        if self.limit < 1:
            raise ValueError(f"budget limit must be positive, got {self.limit}")

    @classmethod
    def for_function(cls, f: ObjectiveFunction, multiplier: int = 100) -> "EvalBudget":
        return cls(limit=multiplier * f.dimension)

    @property
    def remaining(self) -> int:
        return self.limit - self.used

    @property
    def exhausted(self) -> bool:
        return self.used >= self.limit

    def consume(self) -> None:
        if self.used >= self.limit:
            raise BudgetExhausted(f"evaluation budget of {self.limit} spent")
        self.used += 1


def make_benchmark(name: str, dimension: int) -> ObjectiveFunction:
    key = name.lower()
    if key not in _FUNCTIONS:
        raise UnknownFunction(f"unknown benchmark {name!r}; choose from {', '.join(FUNCTION_NAMES)}")
    evaluator, half = _FUNCTIONS[key]
    return ObjectiveFunction(key, int(dimension), -half, half, evaluator)
