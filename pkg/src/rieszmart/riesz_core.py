"""Finite model of a Dedekind complete Riesz space with weak order unit.

Elements are real vectors indexed by the points of a finite weighted sample
space.  Order, lattice operations, the f-algebra product and p-powers are all
componentwise; band projections are multiplication by the indicator of a set
of points.  On a finite space the universal completion and the sup-completion
coincide with the space itself, so every operation returns an ordinary
:class:`Element`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptySpace, NegativeBase, NonPositiveWeight, SpaceMismatch

#: Absolute threshold below which a component counts as zero for band membership.
ZERO_TOL = 1e-12


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SampleSpace:
    """Finite set of sample points carrying strictly positive masses."""

    weights: np.ndarray
    points: tuple = ()

    def __post_init__(self):
        w = _frozen(self.weights)
        if w.ndim != 1 or w.size == 0:
            raise EmptySpace("a sample space needs at least one point")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise NonPositiveWeight(f"weights must be strictly positive, got {w.tolist()}")
        object.__setattr__(self, "weights", w)
        pts = tuple(self.points) if self.points else tuple(range(w.size))
        if len(pts) != w.size:
            raise ValueError("points and weights differ in length")
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return self.weights.size

    def __len__(self):
        return self.size

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, SampleSpace):
            return NotImplemented
        return self.points == other.points and np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash((self.points, self.weights.tobytes()))

    def element(self, values) -> "Element":
        return Element(self, values)

    def constant(self, c: float) -> "Element":
        return Element(self, np.full(self.size, float(c)))

    @property
    def unit(self) -> "Element":
        """The weak order unit e (all ones)."""
        return self.constant(1.0)

    @property
    def zero(self) -> "Element":
        return self.constant(0.0)

    def mask(self, bits) -> "BandMask":
        return BandMask(self, bits)

    def mask_of(self, indices: Iterable[int]) -> "BandMask":
        bits = np.zeros(self.size, dtype=bool)
        bits[list(indices)] = True
        return BandMask(self, bits)

    @property
    def full(self) -> "BandMask":
        return BandMask(self, np.ones(self.size, dtype=bool))

    @property
    def empty(self) -> "BandMask":
        return BandMask(self, np.zeros(self.size, dtype=bool))


def make_space(weights: Sequence[float]) -> SampleSpace:
    weights = list(weights)
    if not weights:
        raise EmptySpace("weight list is empty")
    return SampleSpace(np.asarray(weights, dtype=float))


def check_same_space(*objs) -> SampleSpace:
    space = objs[0].space
    for o in objs[1:]:
        if o.space is not space and o.space != space:
            raise SpaceMismatch("operands live on different sample spaces")
    return space


@dataclass(frozen=True, eq=False)
class Element:
    """A member of E: one real per sample point."""

    space: SampleSpace
    values: np.ndarray

    def __post_init__(self):
        v = _frozen(self.values)
        if v.shape != (self.space.size,):
            raise SpaceMismatch(
                f"expected {self.space.size} values, got shape {v.shape}"
            )
        object.__setattr__(self, "values", v)

    def _wrap(self, values) -> "Element":
        return Element(self.space, values)

    def _other(self, other):
        if isinstance(other, Element):
            check_same_space(self, other)
            return other.values
        return float(other)

    def __add__(self, other):
        return self._wrap(self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.values - self._other(other))

    def __rsub__(self, other):
        return self._wrap(self._other(other) - self.values)

    def __mul__(self, other):
        return self._wrap(self.values * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other: float):
        return self._wrap(self.values / float(other))

    def __neg__(self):
        return self._wrap(-self.values)

    def __abs__(self):
        return self._wrap(np.abs(self.values))

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.values, other.values)

    __hash__ = None

    def sup(self, other) -> "Element":
        return self._wrap(np.maximum(self.values, self._other(other)))

    def inf(self, other) -> "Element":
        return self._wrap(np.minimum(self.values, self._other(other)))

    @property
    def pos(self) -> "Element":
        return self._wrap(np.maximum(self.values, 0.0))

    @property
    def neg(self) -> "Element":
        return self._wrap(np.maximum(-self.values, 0.0))

    def le(self, other, tol: float = 0.0) -> bool:
        """Componentwise ``self <= other + tol``."""
        return bool(np.all(self.values <= self._other(other) + tol))

    def is_positive(self, tol: float = 0.0) -> bool:
        return bool(np.all(self.values >= -tol))

    def allclose(self, other, rtol: float = 1e-10, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.values, self._other(other), rtol=rtol, atol=atol))

    def tolist(self) -> list:
        return self.values.tolist()

    def __repr__(self):
        return f"Element({self.values.tolist()})"


@dataclass(frozen=True, eq=False)
class BandMask:
    """A band projection: keeps the components inside ``mask``."""

    space: SampleSpace
    mask: np.ndarray

    def __post_init__(self):
        m = _frozen(self.mask, dtype=bool)
        if m.shape != (self.space.size,):
            raise SpaceMismatch(f"mask has shape {m.shape}, space has {self.space.size} points")
        object.__setattr__(self, "mask", m)

    def __call__(self, f: Element) -> Element:
        return apply_band(self, f)

    def __eq__(self, other):
        if not isinstance(other, BandMask):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.mask, other.mask)

    __hash__ = None

    def __le__(self, other: "BandMask") -> bool:
        check_same_space(self, other)
        return bool(np.all(~self.mask | other.mask))

    @property
    def indicator(self) -> Element:
        """P e, the component of the unit in this band."""
        return Element(self.space, self.mask.astype(float))

    @property
    def is_full(self) -> bool:
        return bool(self.mask.all())

    @property
    def is_empty(self) -> bool:
        return not self.mask.any()

    def support(self) -> list[int]:
        return np.flatnonzero(self.mask).tolist()

    def __repr__(self):
        return f"BandMask({self.support()})"


def lattice_parts(f: Element) -> tuple[Element, Element, Element]:
    """Return ``(|f|, f+, f-)``."""
    return abs(f), f.pos, f.neg


def multiply(f: Element, g: Element) -> Element:
    check_same_space(f, g)
    return Element(f.space, f.values * g.values)


def power(f: Element, p: float) -> Element:
    """Componentwise p-power of a positive element; ``0**p == 0`` for p > 0."""
    if p <= 0:
        raise ValueError(f"exponent must be positive, got {p}")
    if np.any(f.values < 0):
        raise NegativeBase("power needs a positive base")
    return Element(f.space, np.power(f.values, p))


def band_of(f: Element, tol: float = ZERO_TOL) -> BandMask:
    """P_f: the band generated by f, i.e. the support of |f|."""
    return BandMask(f.space, np.abs(f.values) > tol)


def apply_band(P: BandMask, f: Element) -> Element:
    check_same_space(P, f)
    return Element(f.space, np.where(P.mask, f.values, 0.0))


def complement(P: BandMask) -> BandMask:
    return BandMask(P.space, ~P.mask)


def join(P: BandMask, Q: BandMask) -> BandMask:
    check_same_space(P, Q)
    return BandMask(P.space, P.mask | Q.mask)


def meet(P: BandMask, Q: BandMask) -> BandMask:
    check_same_space(P, Q)
    return BandMask(P.space, P.mask & Q.mask)


def power_gap_bounds(x: Element, y: Element, p: float) -> tuple[Element, Element]:
    """Both sides of the power-gap inequality ``|x^p - y^p| <= rhs``.

    For ``p >= 1`` the bound is ``p|x - y|(x^(p-1) + y^(p-1))``; for
    ``0 < p < 1`` it is ``|x - y|^p``.
    """
    check_same_space(x, y)
    if np.any(x.values < 0) or np.any(y.values < 0):
        raise NegativeBase("power_gap_bounds needs positive arguments")
    lhs = abs(power(x, p) - power(y, p))
    gap = abs(x - y)
    if p >= 1:
        rhs = p * gap * (power(x, p - 1) + power(y, p - 1)) if p > 1 else gap * 2.0
    else:
        rhs = power(gap, p)
    return lhs, rhs
