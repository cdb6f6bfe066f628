import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from rieszmart.errors import EmptySpace, NegativeBase, NonPositiveWeight, SpaceMismatch
from rieszmart.riesz_core import (
    apply_band,
    band_of,
    complement,
    join,
    lattice_parts,
    make_space,
    meet,
    multiply,
    power,
    power_gap_bounds,
)

finite = st.floats(-1e3, 1e3, allow_nan=False)


def vec(n):
    return arrays(float, n, elements=finite)


def test_make_space():
    assert make_space([0.5, 0.5]).size == 2
    assert make_space([1.0]).size == 1
    with pytest.raises(NonPositiveWeight):
        make_space([0.5, 0.0])
    with pytest.raises(EmptySpace):
        make_space([])


def test_lattice_parts_examples():
    s = make_space([1, 1])
    a, p, n = lattice_parts(s.element([1, -2]))
    assert a.tolist() == [1, 2] and p.tolist() == [1, 0] and n.tolist() == [0, 2]
    a, p, n = lattice_parts(s.zero)
    assert a.tolist() == p.tolist() == n.tolist() == [0, 0]
    a, p, n = lattice_parts(s.element([3, 3]))
    assert a.tolist() == [3, 3] and p.tolist() == [3, 3] and n.tolist() == [0, 0]


@given(vec(5))
def test_lattice_identities(x):
    s = make_space(np.ones(5))
    f = s.element(x)
    a, p, n = lattice_parts(f)
    assert np.allclose((p - n).values, f.values)
    assert np.allclose((p + n).values, a.values)
    assert np.all(p.values >= 0) and np.all(n.values >= 0)
    assert np.all(p.values * n.values == 0)


def test_multiply():
    s = make_space([1, 1])
    assert multiply(s.element([1, 2]), s.element([3, 4])).tolist() == [3, 8]
    f = s.element([1.5, -2])
    assert multiply(f, s.unit).tolist() == f.tolist()
    with pytest.raises(SpaceMismatch):
        multiply(f, make_space([1, 1, 1]).unit)


@given(vec(4), vec(4))
def test_square_expansion(x, y):
    s = make_space(np.ones(4))
    f, g = s.element(x), s.element(y)
    lhs = multiply(f + g, f + g)
    rhs = multiply(f, f) + 2 * multiply(f, g) + multiply(g, g)
    assert np.allclose(lhs.values, rhs.values, rtol=1e-9, atol=1e-6)


def test_power():
    s = make_space([1, 1])
    assert np.allclose(power(s.element([4, 9]), 0.5).values, [2, 3])
    assert power(s.unit, 7.3).tolist() == [1, 1]
    assert power(make_space([1]).element([2]), 3).tolist() == [8]
    assert power(s.element([0, 1]), 0.5).tolist() == [0, 1]
    with pytest.raises(NegativeBase):
        power(s.element([-1, 1]), 2)


def test_bands():
    s = make_space([1, 1])
    assert band_of(s.element([0, 3])).support() == [1]
    assert band_of(s.zero).is_empty
    assert band_of(s.element([1, -1])).is_full
    P = s.mask_of([1])
    assert apply_band(P, s.element([5, 5])).tolist() == [0, 5]
    assert join(s.mask_of([0]), s.mask_of([1])).is_full
    assert meet(s.mask_of([0]), s.mask_of([1])).is_empty


@given(vec(6), arrays(bool, 6))
def test_band_decomposition(x, bits):
    s = make_space(np.ones(6))
    f = s.element(x)
    P = s.mask(bits)
    Pd = complement(P)
    assert apply_band(join(P, Pd), f).tolist() == f.tolist()
    assert (apply_band(P, f) + apply_band(Pd, f)).tolist() == f.tolist()
    assert meet(P, Pd).is_empty


def test_power_gap_examples():
    s = make_space([1])
    lhs, rhs = power_gap_bounds(s.element([2]), s.element([1]), 2)
    assert lhs.tolist() == [3] and rhs.tolist() == [6]
    lhs, rhs = power_gap_bounds(s.element([2]), s.element([1]), 0.5)
    assert lhs.values[0] == pytest.approx(math.sqrt(2) - 1) and rhs.tolist() == [1]
    lhs, rhs = power_gap_bounds(s.element([1.7]), s.element([1.7]), 3)
    assert lhs.tolist() == [0]
    with pytest.raises(NegativeBase):
        power_gap_bounds(s.element([-1]), s.element([1]), 2)


@given(
    arrays(float, 3, elements=st.floats(0, 100)),
    arrays(float, 3, elements=st.floats(0, 100)),
    st.floats(0.05, 6),
)
def test_power_gap_property(x, y, p):
    s = make_space(np.ones(3))
    lhs, rhs = power_gap_bounds(s.element(x), s.element(y), p)
    assert np.all(lhs.values <= rhs.values * (1 + 1e-9) + 1e-9)
