"""Descriptive statistics, Kruskal-Wallis H test and Dunn's pairwise post-hoc test.

Tail probabilities are computed here (regularised incomplete gamma by series or
continued fraction, normal tail by ``math.erfc``), so the module needs only numpy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import NamedTuple, Sequence

import numpy as np


class EmptyInput(ValueError):
    pass


@dataclass
class SampleSet:
    label: str
    values: list[float]

    def __post_init__(self):
        self.values = [float(v) for v in self.values]
        if not self.values:
            raise EmptyInput(f"sample {self.label!r} is empty")
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError(f"sample {self.label!r} contains non-finite values")


class Description(NamedTuple):
    mean: float
    median: float
    sd: float
    min: float
    max: float


def describe(values: SampleSet | Sequence[float]) -> Description:
    v = np.asarray(values.values if isinstance(values, SampleSet) else values, dtype=float)
    if v.size == 0:
        raise EmptyInput("describe() of an empty sample")
    sd = float(np.std(v, ddof=1)) if v.size > 1 else 0.0
    return Description(float(np.mean(v)), float(np.median(v)), sd, float(v.min()), float(v.max()))


def rankdata(values: Sequence[float]) -> np.ndarray:
    """1-based ranks, ties get the mean of the ranks they span."""
    v = np.asarray(values, dtype=float)
    order = np.argsort(v, kind="mergesort")
    ranks = np.empty(v.size, dtype=float)
    sorted_v = v[order]
    i = 0
    while i < v.size:
        j = i
        while j + 1 < v.size and sorted_v[j + 1] == sorted_v[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def tie_counts(values: Sequence[float]) -> np.ndarray:
    _, counts = np.unique(np.asarray(values, dtype=float), return_counts=True)
    return counts


# -- tail probabilities -------------------------------------------------------

_EPS = 1e-16
_TINY = 1e-300


def _gamma_series(a: float, x: float) -> float:
    """Regularised lower incomplete gamma P(a, x) by its power series (x < a + 1)."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(10_000):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_cont_frac(a: float, x: float) -> float:
    """Regularised upper incomplete gamma Q(a, x) by Lentz's continued fraction (x >= a + 1)."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, 10_000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def gamma_upper_regularized(a: float, x: float) -> float:
    if a <= 0:
        raise ValueError("shape must be positive")
    if x <= 0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_series(a, x)
    return _gamma_cont_frac(a, x)


def chi2_sf(x: float, df: int) -> float:
    return gamma_upper_regularized(df / 2.0, x / 2.0)


def normal_two_sided(z: float) -> float:
    return math.erfc(abs(z) / math.sqrt(2.0))


# -- tests ---------------------------------------------------------------------


def _as_samples(groups) -> list[SampleSet]:
    out = []
    for i, g in enumerate(groups):
        out.append(g if isinstance(g, SampleSet) else SampleSet(f"g{i}", list(g)))
    return out


def _pooled_ranks(groups: list[SampleSet]):
    pooled = np.concatenate([np.asarray(g.values) for g in groups])
    ranks = rankdata(pooled)
    bounds = np.cumsum([0] + [len(g.values) for g in groups])
    mean_ranks = [float(ranks[bounds[i] : bounds[i + 1]].mean()) for i in range(len(groups))]
    return pooled, mean_ranks


def kruskal_wallis(groups) -> tuple[float, float]:
    """Tie-corrected H statistic and its chi-square (k - 1 df) p-value."""
    groups = _as_samples(groups)
    if len(groups) < 2:
        raise ValueError("Kruskal-Wallis needs at least two groups")
    pooled, mean_ranks = _pooled_ranks(groups)
    n = pooled.size
    t = tie_counts(pooled).astype(float)
    correction = 1.0 - float(np.sum(t**3 - t)) / (n**3 - n) if n > 1 else 0.0
    if correction <= 0.0:
        return 0.0, 1.0
    h = 12.0 / (n * (n + 1)) * sum(
        len(g.values) * r * r for g, r in zip(groups, mean_ranks)
    ) - 3.0 * (n + 1)
    h /= correction
    h = max(h, 0.0)
    return h, chi2_sf(h, len(groups) - 1)


class DunnPair(NamedTuple):
    z: float
    p_unadjusted: float
    p_bonferroni: float


def dunn_test(groups) -> dict[tuple[str, str], DunnPair]:
    """Dunn's z for every pair of groups, with unadjusted and Bonferroni p-values.

    Keys are ``(label_i, label_j)`` for i < j in input order; z is positive when the
    first group has the larger mean rank.
    """
    groups = _as_samples(groups)
    if len(groups) < 2:
        raise ValueError("Dunn's test needs at least two groups")
    pooled, mean_ranks = _pooled_ranks(groups)
    n = pooled.size
    t = tie_counts(pooled).astype(float)
    ties = float(np.sum(t**3 - t)) / (12.0 * (n - 1)) if n > 1 else 0.0
    sigma2 = n * (n + 1) / 12.0 - ties
    m = len(groups) * (len(groups) - 1) // 2
    out = {}
    for i, j in combinations(range(len(groups)), 2):
        ni, nj = len(groups[i].values), len(groups[j].values)
        diff = mean_ranks[i] - mean_ranks[j]
        se2 = sigma2 * (1.0 / ni + 1.0 / nj)
        if se2 <= 0.0 or diff == 0.0:
            z, p = 0.0, 1.0
        else:
            z = diff / math.sqrt(se2)
            p = normal_two_sided(z)
        out[(groups[i].label, groups[j].label)] = DunnPair(z, p, min(1.0, p * m))
    return out


@dataclass
class TestReport:
    kw_H: float
    kw_p: float
    pairwise: dict[tuple[str, str], DunnPair] = field(default_factory=dict)
    descriptions: dict[str, Description] = field(default_factory=dict)

    __test__ = False  # not a pytest class

    def pair(self, a: str, b: str) -> DunnPair:
        """Result for a pair in either order (z flips sign when reversed)."""
        if (a, b) in self.pairwise:
            return self.pairwise[(a, b)]
        r = self.pairwise[(b, a)]
        return DunnPair(-r.z, r.p_unadjusted, r.p_bonferroni)


def compare_samples(groups) -> TestReport:
    groups = _as_samples(groups)
    h, p = kruskal_wallis(groups)
    return TestReport(h, p, dunn_test(groups), {g.label: describe(g) for g in groups})
