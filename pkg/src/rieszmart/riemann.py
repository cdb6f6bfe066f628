"""Riemann integration of E-valued functions on an interval.

Step functions carry exact rational breakpoints and their sums are formed in
exact rational arithmetic (float piece values are exact binary rationals), so
refinement inequalities hold without rounding slack.  General functions are
sampled on dyadic grids.
"""

from __future__ import annotations

import bisect
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BadExponent,
    BadPartition,
    BoundViolated,
    DepthExceeded,
    IntervalMismatch,
    NotConjugate,
    NotIntegrable,
    SpaceMismatch,
)
from .riesz_core import Element, SampleSpace, check_same_space

DEFAULT_MAX_DEPTH = 22


def max_depth() -> int:
    """Dyadic refinement budget; ``LM_MAX_DEPTH`` overrides the default of 22."""
    raw = os.environ.get("LM_MAX_DEPTH")
    return int(raw) if raw else DEFAULT_MAX_DEPTH


def _q(x) -> Fraction:
    # floats convert exactly; strings may be "p/q"
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Partition1D:
    cuts: tuple

    def __post_init__(self):
        cuts = tuple(_q(c) for c in self.cuts)
        if len(cuts) < 2:
            raise BadPartition("a partition needs at least two points")
        if any(b <= a for a, b in zip(cuts, cuts[1:])):
            raise BadPartition("cuts must be strictly increasing")
        object.__setattr__(self, "cuts", cuts)

    @classmethod
    def uniform(cls, a, b, n: int) -> "Partition1D":
        a, b = _q(a), _q(b)
        return cls(tuple(a + (b - a) * Fraction(i, n) for i in range(n + 1)))

    @property
    def a(self) -> Fraction:
        return self.cuts[0]

    @property
    def b(self) -> Fraction:
        return self.cuts[-1]

    @property
    def widths(self) -> tuple:
        return tuple(y - x for x, y in zip(self.cuts, self.cuts[1:]))

    @property
    def mesh(self) -> Fraction:
        return max(self.widths)

    def __len__(self):
        return len(self.cuts) - 1

    def refines(self, other: "Partition1D") -> bool:
        return self.a == other.a and self.b == other.b and set(other.cuts) <= set(self.cuts)

    def union(self, other: "Partition1D") -> "Partition1D":
        if (self.a, self.b) != (other.a, other.b):
            raise IntervalMismatch("partitions of different intervals")
        return Partition1D(tuple(sorted(set(self.cuts) | set(other.cuts))))


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Piecewise constant f: [a, b] -> E, one Element per open subinterval.

    Values at breakpoints are not represented; they do not affect any sum
    or integral.
    """

    partition: Partition1D
    space: SampleSpace
    pieces: np.ndarray

    def __post_init__(self):
        arr = np.array(self.pieces, dtype=float)
        if arr.shape != (len(self.partition), self.space.size):
            raise SpaceMismatch(
                f"pieces shape {arr.shape}, expected {(len(self.partition), self.space.size)}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "pieces", arr)

    @classmethod
    def from_elements(cls, cuts: Sequence, pieces: Sequence[Element]) -> "StepFunction":
        space = pieces[0].space
        check_same_space(*pieces)
        return cls(Partition1D(tuple(cuts)), space, np.array([p.values for p in pieces]))

    @classmethod
    def constant(cls, a, b, c: Element) -> "StepFunction":
        return cls(Partition1D((a, b)), c.space, c.values[None, :])

    @property
    def a(self):
        return self.partition.a

    @property
    def b(self):
        return self.partition.b

    def piece(self, i: int) -> Element:
        return Element(self.space, self.pieces[i])

    def __call__(self, t) -> Element:
        """Value on the piece containing t (right-continuous; t = b uses the last piece)."""
        t = _q(t)
        if not self.a <= t <= self.b:
            raise ValueError(f"{t} outside [{self.a}, {self.b}]")
        i = min(bisect.bisect_right(self.partition.cuts, t) - 1, len(self.partition) - 1)
        return self.piece(i)

    def refine(self, alpha: Partition1D) -> "StepFunction":
        """Same function on a finer partition."""
        if not alpha.refines(self.partition):
            raise BadPartition("target partition does not refine the step partition")
        cuts = self.partition.cuts
        idx = [bisect.bisect_right(cuts, x) - 1 for x in alpha.cuts[:-1]]
        return StepFunction(alpha, self.space, self.pieces[idx])

    def _binary(self, other: "StepFunction", op) -> "StepFunction":
        _check_compatible(self, other)
        common = self.partition.union(other.partition)
        a, b = self.refine(common), other.refine(common)
        return StepFunction(common, self.space, op(a.pieces, b.pieces))

    def __add__(self, other):
        if isinstance(other, StepFunction):
            return self._binary(other, np.add)
        return StepFunction(self.partition, self.space, self.pieces + float(other))

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, other):
        if isinstance(other, StepFunction):
            return self._binary(other, np.multiply)
        if isinstance(other, Element):
            check_same_space(self, other)
            return StepFunction(self.partition, self.space, self.pieces * other.values)
        return StepFunction(self.partition, self.space, self.pieces * float(other))

    __rmul__ = __mul__

    def __neg__(self):
        return StepFunction(self.partition, self.space, -self.pieces)

    def map(self, fn: Callable[[np.ndarray], np.ndarray]) -> "StepFunction":
        return StepFunction(self.partition, self.space, fn(self.pieces))

    def __abs__(self):
        return self.map(np.abs)


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """A bounded function known only through an evaluator.

    ``evaluator`` takes a 1-d float array of points in [a, b] and returns an
    array of shape ``(len(points), n_points)``.  ``bound`` is the declared M
    with ``|f(x)| <= M``; sampled values outside it raise BoundViolated.
    """

    a: float
    b: float
    space: SampleSpace
    evaluator: Callable[[np.ndarray], np.ndarray]
    bound: Element

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        vals = np.asarray(self.evaluator(np.asarray(t, dtype=float)), dtype=float)
        if vals.shape != (len(t), self.space.size):
            raise SpaceMismatch(f"evaluator returned shape {vals.shape}")
        if np.any(np.abs(vals) > self.bound.values * (1 + 1e-12) + 1e-300):
            raise BoundViolated("sampled value exceeds the declared bound")
        return vals


def _check_compatible(f, g):
    if (f.a, f.b) != (g.a, g.b):
        raise IntervalMismatch(f"[{f.a}, {f.b}] vs [{g.a}, {g.b}]")
    check_same_space(f, g)


def _exact_weighted_sum(values: np.ndarray, widths: Sequence[Fraction]) -> np.ndarray:
    """Σ_i values[i] * widths[i] per component, rounded once at the end."""
    out = np.empty(values.shape[1])
    for j in range(values.shape[1]):
        total = Fraction(0)
        for v, w in zip(values[:, j].tolist(), widths):
            if v:
                total += Fraction(v) * w
        out[j] = float(total)
    return out


def _step_extrema(f: StepFunction, alpha: Partition1D) -> tuple[np.ndarray, np.ndarray]:
    cuts = f.partition.cuts
    lo, hi = [], []
    for x, y in zip(alpha.cuts, alpha.cuts[1:]):
        # pieces meeting the open interval (x, y)
        i0 = bisect.bisect_right(cuts, x) - 1
        i1 = bisect.bisect_left(cuts, y) - 1
        chunk = f.pieces[i0 : i1 + 1]
        lo.append(chunk.min(axis=0))
        hi.append(chunk.max(axis=0))
    return np.array(lo), np.array(hi)


def _sampled_extrema(f: SampledFunction, grid: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mids = (grid[:-1] + grid[1:]) / 2
    at_cuts = f.evaluate(grid)
    at_mids = f.evaluate(mids)
    stacked = np.stack([at_cuts[:-1], at_mids, at_cuts[1:]])
    return stacked.min(axis=0), stacked.max(axis=0)


def lower_upper_sums(f, alpha: Partition1D) -> tuple[Element, Element]:
    """``(L(f, α), U(f, α))`` with m_i, M_i the inf/sup on each subinterval."""
    if alpha.a != _q(f.a) or alpha.b != _q(f.b):
        raise BadPartition(f"partition covers [{alpha.a}, {alpha.b}], function [{f.a}, {f.b}]")
    widths = alpha.widths
    if isinstance(f, StepFunction):
        lo, hi = _step_extrema(f, alpha)
        return (
            Element(f.space, _exact_weighted_sum(lo, widths)),
            Element(f.space, _exact_weighted_sum(hi, widths)),
        )
    grid = np.array([float(c) for c in alpha.cuts])
    lo, hi = _sampled_extrema(f, grid)
    w = np.diff(grid)
    return Element(f.space, w @ lo), Element(f.space, w @ hi)


def integrate(f, tol=1e-9, depth_limit: int | None = None) -> Element:
    """Riemann integral.

    Step functions are integrated exactly.  Sampled functions are bisected
    uniformly until ``U - L <= tol`` componentwise and the midpoint
    ``(L + U) / 2`` is returned.
    """
    if isinstance(f, StepFunction):
        return Element(f.space, _exact_weighted_sum(f.pieces, f.partition.widths))
    tol_v = tol.values if isinstance(tol, Element) else float(tol)
    limit = max_depth() if depth_limit is None else depth_limit
    a, b = float(f.a), float(f.b)
    for depth in range(limit + 1):
        grid = np.linspace(a, b, 2**depth + 1)
        lo, hi = _sampled_extrema(f, grid)
        w = np.diff(grid)
        L, U = w @ lo, w @ hi
        if np.all(U - L <= tol_v):
            return Element(f.space, (L + U) / 2)
    raise NotIntegrable(f"U - L above tolerance after {limit} bisections")


def integrable_product(f: StepFunction, g: StepFunction) -> Element:
    """∫ fg on the common refinement of the two step partitions."""
    _check_compatible(f, g)
    return integrate(f * g)


def integrate_power(f: StepFunction, p: float) -> Element:
    """∫ f^p with ``f^p = (f+)^p - (f-)^p``."""
    if not p >= 1:
        raise BadExponent(f"p must be at least 1, got {p}")
    return integrate(f.map(lambda v: np.maximum(v, 0) ** p - np.maximum(-v, 0) ** p))


def holder_check(f: StepFunction, g: StepFunction, p: float, q: float) -> tuple[Element, Element]:
    """``(|∫fg|, (∫|f|^p)^(1/p) (∫|g|^q)^(1/q))``."""
    if not (1 < p < math.inf and 1 < q < math.inf) or abs(1 / p + 1 / q - 1) > 1e-12:
        raise NotConjugate(f"p={p}, q={q} are not conjugate exponents in (1, inf)")
    _check_compatible(f, g)
    lhs = abs(integrable_product(f, g))
    fp = integrate_power(abs(f), p).values ** (1 / p)
    gq = integrate_power(abs(g), q).values ** (1 / q)
    return lhs, Element(f.space, fp * gq)


def rademacher(n: int, space: SampleSpace) -> StepFunction:
    """r_n(t) e on [0, 1]: +e, -e alternating over the 2^n dyadic cells."""
    if n < 1:
        raise ValueError("Rademacher index starts at 1")
    if n > max_depth():
        raise DepthExceeded(f"2^{n} pieces exceed the refinement budget 2^{max_depth()}")
    cells = 2**n
    signs = np.where(np.arange(cells) % 2 == 0, 1.0, -1.0)
    alpha = Partition1D(tuple(Fraction(k, cells) for k in range(cells + 1)))
    return StepFunction(alpha, space, np.outer(signs, np.ones(space.size)))


def lipschitz_transfer_check(f: StepFunction, g: StepFunction, k: float) -> bool:
    """Whether ``|g(x) - g(y)| <= k |f(x) - f(y)|`` on every pair of pieces."""
    _check_compatible(f, g)
    common = f.partition.union(g.partition)
    fv = f.refine(common).pieces
    gv = g.refine(common).pieces
    dg = np.abs(gv[:, None, :] - gv[None, :, :])
    df = np.abs(fv[:, None, :] - fv[None, :, :])
    return bool(np.all(dg <= k * df * (1 + 1e-12) + 1e-15))
