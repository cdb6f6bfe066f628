import numpy as np
import pytest
from hypothesis import strategies as st

from rieszmart import make_space
from rieszmart.expectation import Partition, make_filtration
from rieszmart.harness import generate as gen
from rieszmart.martingale import martingale_from_terminal


@pytest.fixture
def two_point():
    """Uniform two-point space, trivial then discrete filtration, terminal (2, 0)."""
    space = make_space([1.0, 1.0])
    F = make_filtration(space, [Partition.trivial(space), Partition.discrete(space)])
    f = martingale_from_terminal(F, space.element([2.0, 0.0]))
    return space, F, f


seeds = st.integers(min_value=0, max_value=2**32 - 1)


def random_instance(seed, omega=8, depth=4, nonneg=True):
    rng = gen.rng_for(seed)
    space = gen.random_space(rng, int(rng.integers(1, omega + 1)))
    F = gen.random_filtration(rng, space, int(rng.integers(1, depth + 1)))
    return rng, gen.random_martingale_on(rng, F, nonneg)


def le(a, b, tol=1e-9):
    a = getattr(a, "values", a)
    b = getattr(b, "values", b)
    return bool(np.all(np.asarray(a) <= np.asarray(b) + tol * (1 + np.abs(b))))
