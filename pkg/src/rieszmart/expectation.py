"""Conditional expectations as block averages over partitions of the sample space."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadExponent, BadPartition, NotRefining, SpaceMismatch
from .riesz_core import Element, SampleSpace, check_same_space, power

#: Tolerance for deciding that an element is constant on every block.
RANGE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Partition:
    """Disjoint blocks of point indices covering the space.

    ``labels[i]`` is the block index of point ``i``.  The conditional
    expectation induced by the partition is the weight-normalized average on
    each block.
    """

    space: SampleSpace
    blocks: tuple

    def __post_init__(self):
        n = self.space.size
        blocks = tuple(tuple(sorted(int(i) for i in b)) for b in self.blocks)
        labels = np.full(n, -1, dtype=int)
        for j, b in enumerate(blocks):
            if not b:
                raise BadPartition("empty block")
            for i in b:
                if not 0 <= i < n:
                    raise BadPartition(f"point index {i} outside space of size {n}")
                if labels[i] != -1:
                    raise BadPartition(f"point {i} appears in two blocks")
                labels[i] = j
        if np.any(labels < 0):
            missing = np.flatnonzero(labels < 0).tolist()
            raise BadPartition(f"points {missing} are not covered")
        # canonical block order: by smallest member
        order = sorted(range(len(blocks)), key=lambda j: blocks[j][0])
        blocks = tuple(blocks[j] for j in order)
        relabel = np.empty(len(order), dtype=int)
        relabel[order] = np.arange(len(order))
        labels = relabel[labels]
        labels.setflags(write=False)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "labels", labels)
        w = self.space.weights
        block_mass = np.bincount(labels, weights=w, minlength=len(blocks))
        # averaging matrix: A[i, j] = w_j / mass(block(i)) when i, j share a block
        same = labels[:, None] == labels[None, :]
        A = np.where(same, w[None, :] / block_mass[labels][:, None], 0.0)
        A.setflags(write=False)
        object.__setattr__(self, "matrix", A)

    @classmethod
    def trivial(cls, space: SampleSpace) -> "Partition":
        return cls(space, (tuple(range(space.size)),))

    @classmethod
    def discrete(cls, space: SampleSpace) -> "Partition":
        return cls(space, tuple((i,) for i in range(space.size)))

    @classmethod
    def from_labels(cls, space: SampleSpace, labels: Sequence[int]) -> "Partition":
        groups: dict[int, list[int]] = {}
        for i, lab in enumerate(labels):
            groups.setdefault(int(lab), []).append(i)
        return cls(space, tuple(groups.values()))

    def __len__(self):
        return len(self.blocks)

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.space == other.space and self.blocks == other.blocks

    __hash__ = None

    def refines(self, coarser: "Partition") -> bool:
        """True when every block of ``self`` sits inside a block of ``coarser``."""
        return all(len({int(coarser.labels[i]) for i in b}) == 1 for b in self.blocks)

    def average(self, values: np.ndarray) -> np.ndarray:
        """Apply the block average along the last axis of a raw array."""
        return values @ self.matrix.T

    def blockwise_max(self, values: np.ndarray) -> np.ndarray:
        out = np.empty_like(values, dtype=float)
        for b in self.blocks:
            idx = list(b)
            out[..., idx] = values[..., idx].max(axis=-1, keepdims=True)
        return out

    def is_measurable(self, values: np.ndarray, tol: float = RANGE_TOL) -> bool:
        """Membership in R(T): constant on each block up to ``tol`` (scaled)."""
        v = np.asarray(values, dtype=float)
        scale = 1.0 + np.max(np.abs(v), initial=0.0)
        for b in self.blocks:
            spread = np.ptp(v[..., list(b)], axis=-1)
            if np.any(spread > tol * scale):
                return False
        return True

    def is_union_of_blocks(self, mask: np.ndarray) -> bool:
        m = np.asarray(mask, dtype=bool)
        return all(m[list(b)].all() or not m[list(b)].any() for b in self.blocks)


@dataclass(frozen=True, eq=False)
class Filtration:
    """Refining sequence of partitions; ``levels[0]`` is T_1, the coarsest."""

    space: SampleSpace
    levels: tuple

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))

    def __len__(self):
        return len(self.levels)

    def __getitem__(self, i: int) -> Partition:
        return self.levels[i]

    def level(self, n: int) -> Partition:
        """1-based access; level 0 is identified with level 1."""
        return self.levels[max(n, 1) - 1]

    def __eq__(self, other):
        if not isinstance(other, Filtration):
            return NotImplemented
        return self is other or (self.space == other.space and self.levels == other.levels)

    __hash__ = None


def make_filtration(space: SampleSpace, partitions: Sequence[Partition]) -> Filtration:
    partitions = list(partitions)
    if not partitions:
        raise BadPartition("a filtration needs at least one level")
    for p in partitions:
        if p.space is not space and p.space != space:
            raise SpaceMismatch("partition defined on a different space")
    for i in range(1, len(partitions)):
        if not partitions[i].refines(partitions[i - 1]):
            raise NotRefining(i + 1)
    return Filtration(space, tuple(partitions))


def cond_exp(level: Partition, f: Element) -> Element:
    check_same_space(level, f)
    return Element(f.space, level.average(f.values))


def in_range(level: Partition, f: Element, tol: float = RANGE_TOL) -> bool:
    check_same_space(level, f)
    return level.is_measurable(f.values, tol)


def _check_exponent(p: float) -> float:
    p = float(p)
    if math.isnan(p) or p < 1:
        raise BadExponent(f"exponent must lie in [1, inf], got {p}")
    return p


def norm_p(T: Partition, f: Element, p: float) -> Element:
    """Vector-valued L^p(T) norm ``T(|f|^p)^(1/p)``; for ``p = inf`` the blockwise max of |f|."""
    p = _check_exponent(p)
    check_same_space(T, f)
    if math.isinf(p):
        return Element(f.space, T.blockwise_max(np.abs(f.values)))
    if p == 1:
        return cond_exp(T, abs(f))
    return power(cond_exp(T, power(abs(f), p)), 1.0 / p)


def martingale_norm_p(filtration: Filtration, values: Sequence[Element], p: float) -> Element:
    """``sup_n ||f_n||_p`` computed against T_1."""
    values = list(values)
    if not values:
        raise ValueError("empty sequence")
    T = filtration.level(1)
    out = norm_p(T, values[0], p)
    for f in values[1:]:
        out = out.sup(norm_p(T, f, p))
    return out
