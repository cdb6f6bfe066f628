import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from rieszmart.errors import BadLambda, CoefficientUnbounded, HorizonTooDeep
from rieszmart.expectation import Partition, make_filtration
from rieszmart.harness import generate as gen
from rieszmart.martingale import (
    TransformCoefficients,
    martingale_from_terminal,
    maximal,
    square_function,
)
from rieszmart.riesz_core import make_space
from rieszmart.weaktype import (
    MAXIMAL,
    SQUARE,
    rademacher_randomized_bound,
    sign_patterns,
    sign_transform_bound,
    transform_band_domination,
    verify_class_a,
    weak_type_lhs,
    weak_type_ratio,
)

from conftest import le, random_instance, seeds


def test_weak_type_lhs(two_point):
    space, F, f = two_point
    T = F.level(1)
    assert weak_type_lhs(maximal(f), 1.5, T).tolist() == [0.75, 0.75]
    assert weak_type_lhs(maximal(f), 2.0, T).tolist() == [0, 0]
    assert weak_type_lhs(space.zero, 0.1, T).tolist() == [0, 0]
    with pytest.raises(BadLambda):
        weak_type_lhs(space.unit, 0.0, T)


def test_weak_type_ratio(two_point):
    space, F, f = two_point
    lhs, rhs = weak_type_ratio(MAXIMAL, f, 1.5)
    assert lhs.tolist() == [0.75, 0.75] and rhs.tolist() == [1, 1]
    const = martingale_from_terminal(F, space.unit)
    assert weak_type_ratio(MAXIMAL, const, 1.01)[0].tolist() == [0, 0]


def test_class_a_constants(two_point):
    space, F, _ = two_point
    consts = [martingale_from_terminal(F, space.constant(c)) for c in (1.0, -2.0, 0.5)]
    rep = verify_class_a(MAXIMAL, consts)
    assert rep.quasi_linearity.constant <= 1
    assert rep.band_domination.constant == 1
    rng = gen.rng_for(3)
    sample = [gen.random_martingale_on(rng, F, False) for _ in range(50)]
    rep = verify_class_a(SQUARE, sample)
    assert rep.l1_increment.constant <= 1 + 1e-12
    assert all(np.isfinite(m.constant) for m in (rep.quasi_linearity, rep.l2, rep.band_domination))
    assert rep.to_json()["schema"] == "weaktype/1"


def test_transform_band_examples(two_point):
    space, F, f = two_point
    zero = TransformCoefficients(F, np.zeros((2, 2)))
    Ph, Pf, Psh = transform_band_domination(f, zero, 1.0)
    assert Ph.is_empty and Ph <= Pf
    ones = TransformCoefficients(F, np.ones((2, 2)))
    Ph, Pf, _ = transform_band_domination(f, ones, 1.0)
    assert Ph.support() == Pf.support()
    pm = TransformCoefficients(F, np.array([[1.0, 1.0], [-1.0, -1.0]]))
    Ph, Pf, Psh = transform_band_domination(f, pm, 1.0)
    assert Ph.is_full and Pf.is_full and Psh <= Pf
    with pytest.raises(CoefficientUnbounded):
        transform_band_domination(f, pm, 0.5)


def test_sign_patterns_match_dyadic_cells():
    from rieszmart.riemann import rademacher
    from fractions import Fraction

    n = 4
    s = make_space([1.0])
    pats = sign_patterns(n)
    assert pats.shape == (16, 4)
    assert {tuple(r) for r in pats} == set(itertools.product((1.0, -1.0), repeat=n))
    for k in range(1, n + 1):
        rk = rademacher(k, s)
        for j in range(2**n):
            mid = Fraction(2 * j + 1, 2 ** (n + 1))
            assert rk(mid).values[0] == pats[j, k - 1]


def test_rademacher_bound_fixture(two_point):
    _, _, f = two_point
    b = rademacher_randomized_bound(f)
    assert np.allclose(b.avg.values, 1) and np.allclose(b.sq.values, np.sqrt(2))
    assert le(b.maxavg, b.sq)


def test_rademacher_bound_single_increment():
    space = make_space([1.0, 3.0])
    F = make_filtration(space, [Partition.discrete(space)])
    f = martingale_from_terminal(F, space.element([2.0, -1.0]))
    b = rademacher_randomized_bound(f)
    assert np.allclose(b.avg.values, b.sq.values)


def test_horizon_limit():
    space = make_space([1.0] * 2)
    d = Partition.discrete(space)
    F = make_filtration(space, [d] * 15)
    f = martingale_from_terminal(F, space.element([1.0, 2.0]))
    with pytest.raises(HorizonTooDeep):
        rademacher_randomized_bound(f)


def _brute_avg(f):
    """Direct loop over sign tuples; T = T_1."""
    T = f.filtration.level(1)
    acc = np.zeros(f.space.size)
    for signs in itertools.product((1, -1), repeat=f.horizon):
        acc += T.average(np.abs(np.dot(signs, f.increments)))
    return acc / 2**f.horizon


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_rademacher_bound_properties(seed):
    rng, f = random_instance(seed, omega=8, depth=6, nonneg=bool(seed % 2))
    b = rademacher_randomized_bound(f)
    assert np.allclose(b.avg.values, _brute_avg(f))
    assert le(b.avg, b.sq) and le(b.maxavg, b.sq)
    assert np.allclose(b.maxavg.values, b.avg.values)
    lhs, rhs = sign_transform_bound(f, float(rng.uniform(0.1, 2)))
    assert np.all(np.isfinite(lhs.values)) and np.all(rhs.values >= 0)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_weak_type_sweep(seed):
    rng, f = random_instance(seed, omega=10, depth=5)
    for lam in (0.25, 0.5, 1.0, 2.0):
        lhs, rhs = weak_type_ratio(MAXIMAL, f, lam)
        assert le(lhs, rhs)
        lhs, rhs = weak_type_ratio(SQUARE, f, lam)
        assert le(lhs, 3 * rhs)
    v = gen.random_predictable(rng, f.filtration, 2.0)
    Ph, Pf, Psh = transform_band_domination(f, v, 2.0)
    assert Ph <= Pf and Psh <= Pf
    g = gen.random_martingale_on(rng, f.filtration, False)
    assert le(maximal(f + g), maximal(f) + maximal(g), 1e-12)
    assert le(square_function(f + g), square_function(f) + square_function(g), 1e-12)
