"""Seeded random instances: spaces, filtrations, martingales, stopping times, step functions.

All draws come from ``numpy.random.Generator(PCG64(seed))``.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..expectation import Filtration, Partition, make_filtration
from ..martingale import Martingale, StoppingTime, TransformCoefficients, martingale_from_terminal
from ..riemann import Partition1D, StepFunction
from ..riesz_core import Element, SampleSpace, make_space
from .config import HarnessConfig


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_space(rng: np.random.Generator, n: int) -> SampleSpace:
    return make_space(rng.uniform(0.2, 1.0, size=n))


def _split_block(rng, labels: np.ndarray, next_label: int) -> bool:
    sizes = np.bincount(labels)
    splittable = np.flatnonzero(sizes >= 2)
    if splittable.size == 0:
        return False
    block = rng.choice(splittable)
    members = rng.permutation(np.flatnonzero(labels == block))
    cut = int(rng.integers(1, members.size))
    labels[members[cut:]] = next_label
    return True


def random_filtration(rng: np.random.Generator, space: SampleSpace, depth: int) -> Filtration:
    """Refining chain: start from one or two blocks, split random blocks in two
    until each level reaches its target block count (the last level is discrete)."""
    n = space.size
    first = int(rng.integers(1, min(2, n) + 1))
    if depth == 1:
        targets = [first]
    else:
        targets = [first + round((n - first) * i / (depth - 1)) for i in range(depth)]
    labels = np.zeros(n, dtype=int)
    count = 1
    levels = []
    for target in targets:
        while count < target and _split_block(rng, labels, count):
            count += 1
        levels.append(Partition.from_labels(space, labels.copy()))
    return make_filtration(space, levels)


def random_terminal(rng: np.random.Generator, space: SampleSpace, nonneg: bool) -> Element:
    n = space.size
    scale = rng.uniform(0.2, 3.0)
    if nonneg:
        vals = rng.exponential(scale, size=n) * (rng.random(n) < 0.75)
    else:
        vals = rng.normal(0.0, scale, size=n)
    return Element(space, vals)


def shape_for(cfg: HarnessConfig, rng: np.random.Generator) -> tuple[int, int]:
    if cfg.vary_shape:
        return int(rng.integers(1, cfg.omega_size + 1)), int(rng.integers(1, cfg.depth + 1))
    return cfg.omega_size, cfg.depth


def random_martingale_on(
    rng: np.random.Generator, filtration: Filtration, nonneg: bool
) -> Martingale:
    return martingale_from_terminal(filtration, random_terminal(rng, filtration.space, nonneg))


def generate_random_martingale(cfg: HarnessConfig, rng: np.random.Generator | None = None) -> Martingale:
    """Deterministic in ``cfg.seed`` unless an explicit generator is passed."""
    rng = rng if rng is not None else rng_for(cfg.seed)
    omega, depth = shape_for(cfg, rng)
    space = random_space(rng, omega)
    F = random_filtration(rng, space, depth)
    return random_martingale_on(rng, F, cfg.nonneg_only)


def corrupt_values(rng: np.random.Generator, f: Martingale) -> np.ndarray:
    """Copy of f's values with one point of one level bumped off its projection.

    For horizons of two or more the bump always breaks T_{k-1} f_k = f_{k-1}.
    """
    vals = np.array(f.values)
    level = int(rng.integers(0, vals.shape[0]))
    point = int(rng.integers(0, vals.shape[1]))
    vals[level, point] += 1.0 + np.abs(vals[level]).max()
    return vals


def random_adapted(rng: np.random.Generator, filtration: Filtration, nonneg: bool = True) -> np.ndarray:
    """Rows x_1..x_N with x_k constant on level-k blocks."""
    n = filtration.space.size
    rows = []
    for lvl in filtration.levels:
        raw = rng.exponential(1.0, size=n) if nonneg else rng.normal(size=n)
        rows.append(lvl.average(raw))
    return np.array(rows)


def random_stopping_time(rng: np.random.Generator, filtration: Filtration, p: float = 0.3) -> StoppingTime:
    """Each level adds every not-yet-stopped block independently with probability p."""
    n = filtration.space.size
    current = np.zeros(n, dtype=bool)
    rows = []
    for lvl in filtration.levels:
        for b in lvl.blocks:
            idx = list(b)
            if not current[idx].any() and rng.random() < p:
                current[idx] = True
        rows.append(current.copy())
    return StoppingTime(filtration.space, np.array(rows), filtration)


def random_predictable(
    rng: np.random.Generator, filtration: Filtration, bound: float = 1.0
) -> TransformCoefficients:
    n = filtration.space.size
    rows = []
    for k in range(1, len(filtration) + 1):
        lvl = filtration.level(k - 1)
        rows.append(lvl.average(rng.uniform(-bound, bound, size=n)))
    return TransformCoefficients(filtration, np.array(rows))


def random_step_function(
    rng: np.random.Generator, space: SampleSpace, max_pieces: int = 6, denominator: int = 16
) -> StepFunction:
    """Step function on [0, 1] with random breakpoints in (1/denominator)Z."""
    k = int(rng.integers(1, max_pieces + 1))
    inner = sorted(rng.choice(np.arange(1, denominator), size=min(k - 1, denominator - 1), replace=False))
    cuts = [Fraction(0)] + [Fraction(int(c), denominator) for c in inner] + [Fraction(1)]
    pieces = rng.normal(0.0, 1.0, size=(len(cuts) - 1, space.size))
    return StepFunction(Partition1D(tuple(cuts)), space, pieces)


def random_refinement(rng: np.random.Generator, alpha: Partition1D, extra: int = 3) -> Partition1D:
    cuts = set(alpha.cuts)
    for _ in range(extra):
        i = int(rng.integers(0, len(alpha)))
        x, y = alpha.cuts[i], alpha.cuts[i + 1]
        cuts.add(x + (y - x) * Fraction(int(rng.integers(1, 8)), 8))
    return Partition1D(tuple(sorted(cuts)))
