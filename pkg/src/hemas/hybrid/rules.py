"""Trigger rules deciding which agents take part in a hybrid step.

Rule names follow the compact ``<metric><relation><threshold>`` form, e.g. ``VE0``,
``VG0.5``, ``ELQ1``, ``EGQ3``, ``EL3``, ``SLQ1``:

* metric: ``V`` population variety (global), ``E`` agent energy, ``S`` agent solution fitness
* relation: ``L`` less, ``G`` greater, ``E`` equal
* threshold: a number, ``M`` (mean) or ``Q1``/``Q2``/``Q3`` (quartiles over the population)
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

EQUAL_TOLERANCE = 1e-12


class Metric(enum.Enum):
    VARIETY = "V"
    ENERGY = "E"
    FITNESS = "S"


class Relation(enum.Enum):
    LESS = "L"
    GREATER = "G"
    EQUAL = "E"


class Statistic(enum.Enum):
    MEAN = "M"
    Q1 = "Q1"
    MEDIAN = "Q2"
    Q3 = "Q3"


class Scope(enum.Enum):
    PER_AGENT = "per_agent"
    GLOBAL = "global"


class EmptyInput(ValueError):
    pass


class RuleSyntaxError(ValueError):
    pass


Threshold = Union[float, Statistic]

_QUARTILE_P = {Statistic.Q1: 0.25, Statistic.MEDIAN: 0.5, Statistic.Q3: 0.75}


def quartile(values, which: Statistic | str) -> float:
    """Quartile by linear interpolation between order statistics at h = (n - 1) p."""
    which = Statistic(which) if isinstance(which, str) else which
    if which is Statistic.MEAN:
        raise ValueError("quartile() takes Q1, Q2 (median) or Q3")
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        raise EmptyInput("quartile of an empty sequence")
    h = (v.size - 1) * _QUARTILE_P[which]
    lo = int(np.floor(h))
    if lo + 1 >= v.size:
        return float(v[lo])
    return float(v[lo] + (h - lo) * (v[lo + 1] - v[lo]))


def diversity(genotypes) -> float:
    """Smallest per-gene population standard deviation (ddof=0)."""
    g = np.asarray(genotypes, dtype=float)
    if g.ndim != 2 or g.shape[0] == 0:
        raise EmptyInput("diversity needs a non-empty population matrix")
    return float(np.min(np.std(g, axis=0)))


def _resolve(threshold: Threshold, values: np.ndarray) -> float:
    if isinstance(threshold, Statistic):
        if threshold is Statistic.MEAN:
            return float(np.mean(values))
        return quartile(values, threshold)
    return float(threshold)


def _compare(values, relation: Relation, bound: float):
    if relation is Relation.LESS:
        return values < bound
    if relation is Relation.GREATER:
        return values > bound
    return np.abs(values - bound) <= EQUAL_TOLERANCE


@dataclass(frozen=True)
class RuleSpec:
    metric: Metric
    relation: Relation
    threshold: Threshold

    def __post_init__(self):
        if self.metric is Metric.VARIETY and isinstance(self.threshold, Statistic):
            raise RuleSyntaxError("variety rules need a constant threshold")

    @property
    def scope(self) -> Scope:
        return Scope.GLOBAL if self.metric is Metric.VARIETY else Scope.PER_AGENT

    @property
    def name(self) -> str:
        if isinstance(self.threshold, Statistic):
            t = self.threshold.value
        else:
            t = f"{self.threshold:g}"
        return f"{self.metric.value}{self.relation.value}{t}"

    def __str__(self) -> str:
        return self.name

    def select(self, population) -> list[int]:
        """Ids of the agents willing to take part (all or none for global rules)."""
        agents = population.agents
        if not agents:
            return []
        if self.metric is Metric.VARIETY:
            value = diversity(population.genotypes())
            hit = bool(_compare(np.array(value), self.relation, float(self.threshold)))
            return [a.id for a in agents] if hit else []
        if self.metric is Metric.ENERGY:
            values = population.energies()
        else:
            values = population.fitnesses()
        mask = _compare(values, self.relation, _resolve(self.threshold, values))
        return [a.id for a, m in zip(agents, mask) if m]


_RULE_RE = re.compile(r"^([VES])([LGE])(Q[123]|M|[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)$")


def parse_rule(text: str) -> RuleSpec:
    m = _RULE_RE.match(text.strip())
    if not m:
        raise RuleSyntaxError(f"cannot parse trigger rule {text!r}")
    metric, relation, thr = m.groups()
    threshold: Threshold
    if thr == "M" or thr.startswith("Q"):
        threshold = Statistic(thr)
    else:
        threshold = float(thr)
    return RuleSpec(Metric(metric), Relation(relation), threshold)


def evaluate_rule(rule: RuleSpec | str, population) -> list[int]:
    if isinstance(rule, str):
        rule = parse_rule(rule)
    return rule.select(population)
