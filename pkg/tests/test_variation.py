import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hemas.benchmarks import DimensionMismatch
from hemas.variation import (
    MutationParams,
    SbxParams,
    derive_seed,
    make_rng,
    polynomial_delta,
    polynomial_mutation,
    sbx_children,
    sbx_crossover,
    sbx_spread,
    strong_mutation,
)

BOUNDS = (-5.12, 5.12)


def test_spread_at_half_is_one():
    assert sbx_spread(0.5, 5.0) == pytest.approx(1.0)


def test_children_at_half_are_parents():
    p1, p2 = np.array([0.0, 1.0]), np.array([1.0, -2.0])
    c1, c2 = sbx_children(p1, p2, np.full(2, 0.5), 5.0)
    np.testing.assert_allclose(c1, p1)
    np.testing.assert_allclose(c2, p2)


def test_children_worked_example():
    # beta = (0.5 / 0.1) ** (1/6)
    beta = 5.0 ** (1 / 6)
    c1, c2 = sbx_children(np.array([0.0]), np.array([1.0]), np.array([0.9]), 5.0)
    assert c1[0] == pytest.approx(0.5 * (1 - beta), abs=1e-12)
    assert c2[0] == pytest.approx(0.5 * (1 + beta), abs=1e-12)
    assert c1[0] == pytest.approx(-0.1539, abs=1e-4)
    assert c2[0] == pytest.approx(1.1539, abs=1e-4)


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.floats(-5.0, 5.0), min_size=1, max_size=8),
    st.lists(st.floats(-5.0, 5.0), min_size=1, max_size=8),
    st.floats(0.0, 0.999),
)
def test_children_preserve_mean(a, b, u):
    n = min(len(a), len(b))
    p1, p2 = np.array(a[:n]), np.array(b[:n])
    c1, c2 = sbx_children(p1, p2, np.full(n, u), 5.0)
    np.testing.assert_allclose(c1 + c2, p1 + p2, atol=1e-9)


def test_identical_parents_unchanged():
    p = np.array([1.0, -2.0, 3.5])
    c1, c2 = sbx_crossover(p, p.copy(), SbxParams(), BOUNDS, make_rng(1))
    np.testing.assert_array_equal(c1, p)
    np.testing.assert_array_equal(c2, p)


def test_crossover_probability_zero_copies():
    p1, p2 = np.zeros(3), np.ones(3)
    c1, c2 = sbx_crossover(p1, p2, SbxParams(5.0, 0.0), BOUNDS, make_rng(2))
    np.testing.assert_array_equal(c1, p1)
    np.testing.assert_array_equal(c2, p2)
    assert c1 is not p1


def test_crossover_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        sbx_crossover(np.zeros(2), np.zeros(3), SbxParams(), BOUNDS, make_rng(0))


def test_operators_respect_bounds():
    rng = make_rng(3)
    lo, hi = BOUNDS
    for _ in range(10_000):
        p1 = rng.uniform(lo, hi, 4)
        p2 = rng.uniform(lo, hi, 4)
        c1, c2 = sbx_crossover(p1, p2, SbxParams(), BOUNDS, rng)
        m = polynomial_mutation(c1, MutationParams(10.0, 0.5), BOUNDS, rng)
        for v in (c1, c2, m):
            assert lo <= v.min() and v.max() <= hi


def test_mutation_probability_zero_is_identity():
    x = np.linspace(-5, 5, 20)
    out = polynomial_mutation(x, MutationParams(10.0, 0.0), BOUNDS, make_rng(4))
    np.testing.assert_array_equal(out, x)
    assert out is not x


def test_delta_zero_at_half():
    assert polynomial_delta(np.array([1.0]), np.array([0.5]), -5.0, 5.0, 20.0)[0] == pytest.approx(0.0)


def test_delta_sign_and_reach():
    x = np.array([0.0, 0.0])
    d = polynomial_delta(x, np.array([0.0, 0.999999999]), -1.0, 1.0, 20.0)
    assert -0.5 <= d[0] < 0 < d[1] <= 0.5


def test_strong_mutation_moves_nearly_every_gene():
    x = np.zeros(1000)
    out = strong_mutation(x, BOUNDS, make_rng(5))
    assert np.count_nonzero(out != x) >= 990


def test_determinism():
    a = polynomial_mutation(np.zeros(50), MutationParams(10, 0.3), BOUNDS, make_rng(9))
    b = polynomial_mutation(np.zeros(50), MutationParams(10, 0.3), BOUNDS, make_rng(9))
    np.testing.assert_array_equal(a, b)


def test_derive_seed_depends_on_index_only():
    seeds = [derive_seed(7, i) for i in range(5)]
    assert len(set(seeds)) == 5
    assert seeds[:3] == [derive_seed(7, i) for i in range(3)]
    assert derive_seed(8, 0) != seeds[0]
    assert all(0 <= s < 2**64 for s in seeds)


def test_param_validation():
    with pytest.raises(ValueError):
        SbxParams(-1.0, 1.0)
    with pytest.raises(ValueError):
        MutationParams(10.0, 1.5)
