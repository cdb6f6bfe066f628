"""Martingales, stopping times and transforms on a finite filtration.

Time runs over ``1..N`` with the conventions ``f_0 = 0`` (so ``Δf_1 = f_1``)
and ``P_0`` equal to the stopping time's initial mask, empty unless stated.
Sequences are stored as ``(N, n_points)`` arrays; indexing helpers return
:class:`Element` views.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    FiltrationMismatch,
    NegativeProcess,
    NotAMartingale,
    NotAStoppingTime,
    NotPredictable,
    SpaceMismatch,
    UnboundedStop,
)
from .expectation import RANGE_TOL, Filtration, martingale_norm_p
from .riesz_core import ZERO_TOL, BandMask, Element

MARTINGALE_TOL = 1e-10


def _as_rows(values, n_points: int) -> np.ndarray:
    if isinstance(values, np.ndarray):
        arr = np.array(values, dtype=float)
    else:
        arr = np.array([v.values if isinstance(v, Element) else v for v in values], dtype=float)
    if arr.ndim != 2 or arr.shape[1] != n_points:
        raise SpaceMismatch(f"expected rows of length {n_points}, got shape {arr.shape}")
    return arr


def increments(values: np.ndarray) -> np.ndarray:
    """Row differences with ``Δf_1 = f_1``."""
    return np.diff(values, axis=0, prepend=np.zeros((1, values.shape[1])))


def martingale_violation(filtration: Filtration, values) -> float:
    """Largest scaled defect of adaptedness or projection consistency.

    Zero for an exact martingale; the scale is ``1 + max |f|``.
    """
    arr = _as_rows(values, filtration.space.size)
    if arr.shape[0] > len(filtration):
        return np.inf
    scale = 1.0 + np.max(np.abs(arr), initial=0.0)
    worst = 0.0
    for i in range(arr.shape[0]):
        level = filtration[i]
        # adaptedness: f_i constant on level-i blocks
        worst = max(worst, float(np.max(np.abs(level.average(arr[i]) - arr[i]), initial=0.0)))
        # consistency: T_i f_{i+1} = f_i is enough by the tower property
        if i + 1 < arr.shape[0]:
            worst = max(worst, float(np.max(np.abs(level.average(arr[i + 1]) - arr[i]))))
    return worst / scale


def is_martingale(filtration: Filtration, values, tol: float = MARTINGALE_TOL) -> bool:
    try:
        return martingale_violation(filtration, values) <= tol
    except SpaceMismatch:
        return False


@dataclass(frozen=True, eq=False)
class Martingale:
    """Sequence ``f_1..f_N`` adapted to ``filtration`` with ``T_i f_j = f_i``."""

    filtration: Filtration
    values: np.ndarray
    tol: float = MARTINGALE_TOL

    def __post_init__(self):
        arr = _as_rows(self.values, self.filtration.space.size)
        if arr.shape[0] == 0:
            raise NotAMartingale("empty sequence")
        if arr.shape[0] != len(self.filtration):
            raise NotAMartingale(
                f"{arr.shape[0]} values for a filtration of depth {len(self.filtration)}"
            )
        gap = martingale_violation(self.filtration, arr)
        if gap > self.tol:
            raise NotAMartingale(f"martingale defect {gap:.3e} exceeds {self.tol:.1e}")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def space(self):
        return self.filtration.space

    @property
    def horizon(self) -> int:
        return self.values.shape[0]

    def __len__(self):
        return self.horizon

    def __getitem__(self, n: int) -> Element:
        """``f[n]`` is f_n, 1-based; ``f[0]`` is the zero element."""
        if n == 0:
            return self.space.zero
        if not 1 <= n <= self.horizon:
            raise IndexError(n)
        return Element(self.space, self.values[n - 1])

    def elements(self) -> list[Element]:
        return [Element(self.space, row) for row in self.values]

    @property
    def increments(self) -> np.ndarray:
        return increments(self.values)

    def delta(self, n: int) -> Element:
        return Element(self.space, self.increments[n - 1])

    def __neg__(self):
        return Martingale(self.filtration, -self.values, self.tol)

    def __add__(self, other: "Martingale"):
        _same_filtration(self.filtration, other.filtration)
        return Martingale(self.filtration, self.values + other.values, self.tol)

    def __sub__(self, other: "Martingale"):
        _same_filtration(self.filtration, other.filtration)
        return Martingale(self.filtration, self.values - other.values, self.tol)

    def norm(self, p: float) -> Element:
        return martingale_norm_p(self.filtration, self.elements(), p)

    def is_nonnegative(self, tol: float = 0.0) -> bool:
        return bool(np.all(self.values >= -tol))


def _same_filtration(a: Filtration, b: Filtration):
    if a is not b and a != b:
        raise FiltrationMismatch("objects are adapted to different filtrations")


def martingale_from_terminal(filtration: Filtration, terminal: Element) -> Martingale:
    if terminal.space is not filtration.space and terminal.space != filtration.space:
        raise SpaceMismatch("terminal element lives on another space")
    # f_N = T_N(terminal), which is the terminal itself when it is level-N measurable
    rows = [lvl.average(terminal.values) for lvl in filtration.levels]
    return Martingale(filtration, np.array(rows))


@dataclass(frozen=True, eq=False)
class StoppingTime:
    """Increasing band projections ``P_1 <= ... <= P_N`` adapted to a filtration.

    ``initial`` is P_0.  When ``filtration`` is given, each P_i must be a
    union of level-i blocks (P_0 a union of level-1 blocks).
    """

    space: object
    masks: np.ndarray
    filtration: Filtration | None = None
    initial: np.ndarray | None = None

    def __post_init__(self):
        m = np.array(self.masks, dtype=bool)
        if m.ndim != 2 or m.shape[1] != self.space.size:
            raise SpaceMismatch(f"mask array has shape {m.shape}")
        init = (
            np.zeros(self.space.size, dtype=bool)
            if self.initial is None
            else np.array(self.initial, dtype=bool)
        )
        stacked = np.vstack([init, m])
        if np.any(stacked[:-1] & ~stacked[1:]):
            raise NotAStoppingTime("masks must increase")
        if self.filtration is not None:
            if len(self.filtration) != m.shape[0]:
                raise NotAStoppingTime("one mask per filtration level required")
            for i, row in enumerate(stacked):
                if not self.filtration.level(i).is_union_of_blocks(row):
                    raise NotAStoppingTime(f"P_{i} is not measurable at level {max(i, 1)}")
        m.setflags(write=False)
        init.setflags(write=False)
        object.__setattr__(self, "masks", m)
        object.__setattr__(self, "initial", init)

    @classmethod
    def never(cls, filtration: Filtration) -> "StoppingTime":
        n = len(filtration)
        return cls(filtration.space, np.zeros((n, filtration.space.size), bool), filtration)

    @classmethod
    def immediate(cls, filtration: Filtration) -> "StoppingTime":
        n = len(filtration)
        return cls(filtration.space, np.ones((n, filtration.space.size), bool), filtration)

    @property
    def horizon(self) -> int:
        return self.masks.shape[0]

    def __getitem__(self, i: int) -> BandMask:
        """P_i, 1-based; P_0 is the initial mask."""
        if i == 0:
            return BandMask(self.space, self.initial)
        return BandMask(self.space, self.masks[i - 1])

    @property
    def with_initial(self) -> np.ndarray:
        """Rows P_0..P_N."""
        return np.vstack([self.initial, self.masks])

    @property
    def deltas(self) -> np.ndarray:
        """Rows ΔP_1..ΔP_N as boolean arrays."""
        full = self.with_initial
        return full[1:] & ~full[:-1]

    def delta(self, i: int) -> BandMask:
        return BandMask(self.space, self.deltas[i - 1])

    @property
    def limit(self) -> BandMask:
        """P_∞, the final mask at the horizon."""
        return BandMask(self.space, self.masks[-1])

    def join(self, other: "StoppingTime") -> "StoppingTime":
        return StoppingTime(
            self.space,
            self.masks | other.masks,
            self.filtration,
            self.initial | other.initial,
        )


@dataclass(frozen=True, eq=False)
class TransformCoefficients:
    """Predictable multipliers: v_k measurable at level k-1 (v_1 at level 1)."""

    filtration: Filtration
    coeffs: np.ndarray

    def __post_init__(self):
        c = _as_rows(self.coeffs, self.filtration.space.size)
        if c.shape[0] != len(self.filtration):
            raise NotPredictable("one coefficient per level required")
        for k in range(1, c.shape[0] + 1):
            if not self.filtration.level(k - 1).is_measurable(c[k - 1], RANGE_TOL):
                raise NotPredictable(f"v_{k} is not measurable at level {max(k - 1, 1)}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def bound(self) -> float:
        return float(np.max(np.abs(self.coeffs), initial=0.0))


def transform(f: Martingale, v: TransformCoefficients) -> Martingale:
    """``h_n = Σ_{k<=n} v_k Δf_k``."""
    _same_filtration(f.filtration, v.filtration)
    return Martingale(f.filtration, np.cumsum(v.coeffs * f.increments, axis=0))


def maximal(f: Martingale) -> Element:
    return Element(f.space, np.max(np.abs(f.values), axis=0))


def square_function(f: Martingale) -> Element:
    return Element(f.space, np.sqrt(np.sum(f.increments**2, axis=0)))


def threshold_stopping_time(
    x, lam: float, filtration: Filtration | None = None, space=None
) -> StoppingTime:
    """P_k = band of ``∨_{i<=k} (x_i - λe)^+``: first strict crossing of λ."""
    if isinstance(x, Martingale):
        filtration = filtration or x.filtration
        arr = np.array(x.values)
        space = x.space
    else:
        x = list(x)
        space = space or (filtration.space if filtration else x[0].space)
        arr = _as_rows(x, space.size)
    if lam <= 0:
        raise ValueError(f"threshold must be positive, got {lam}")
    if np.any(arr < 0):
        raise NegativeProcess("threshold stopping times need a positive process")
    running = np.maximum.accumulate(arr, axis=0)
    masks = (running - lam) > ZERO_TOL
    return StoppingTime(space, masks, filtration)


def stopped_process(
    f: Martingale, P: StoppingTime, bounded: bool = True
) -> tuple[Element, Martingale]:
    """Return ``(f_P, (f_{n∧P})_n)``.

    ``f_P = Σ ΔP_i f_i``; with ``bounded=True`` the stop must be certain by
    the horizon (``P_N`` full), otherwise ``f_P`` only covers ``∪ P_i``.  The
    stopped path has increments ``P_{k-1}^d Δf_k``.  A nonempty initial mask
    stops at time 0 where ``f_0 = 0``.
    """
    if P.filtration is not None:
        _same_filtration(f.filtration, P.filtration)
    if bounded and not P.masks[-1].all():
        raise UnboundedStop("P_N is not the full band")
    value = np.sum(np.where(P.deltas, f.values, 0.0), axis=0)
    not_stopped = ~P.with_initial[:-1]
    path = np.cumsum(np.where(not_stopped, f.increments, 0.0), axis=0)
    return Element(f.space, value), Martingale(f.filtration, path)


def krickeberg(f: Martingale) -> tuple[Martingale, Martingale]:
    """Split ``f = g - h`` with g, h positive martingales built from ``f_N^±``."""
    terminal = f[f.horizon]
    return (
        martingale_from_terminal(f.filtration, terminal.pos),
        martingale_from_terminal(f.filtration, terminal.neg),
    )


def band_sup_delta_bound(Pa: StoppingTime, Pb: StoppingTime) -> list[tuple[Element, Element]]:
    """Per step, indicators of ``Δ(Pa ∨ Pb)_i`` and ``ΔPa_i + ΔPb_i``."""
    if Pa.filtration is not None and Pb.filtration is not None:
        _same_filtration(Pa.filtration, Pb.filtration)
    elif Pa.space != Pb.space:
        raise FiltrationMismatch("stopping times on different spaces")
    if Pa.horizon != Pb.horizon:
        raise FiltrationMismatch("stopping times with different horizons")
    joined = Pa.join(Pb)
    space = Pa.space
    lhs = joined.deltas.astype(float)
    rhs = Pa.deltas.astype(float) + Pb.deltas.astype(float)
    return [(Element(space, a), Element(space, b)) for a, b in zip(lhs, rhs)]


def abel_band_identity(P: StoppingTime, a: Sequence[Element]) -> tuple[Element, Element]:
    """Both sides of the Abel summation identity for band projections.

    ``lhs = P_∞ Σ_{k>=2} P_{k-1}^d a_k`` and
    ``rhs = Σ_{k>=2} ΔP_k (a_2 + ... + a_k)``.  The left sum starts at k = 2;
    the k = 1 term ``P_∞ P_0^d a_1`` has no counterpart on the right.
    """
    arr = _as_rows(list(a), P.space.size)
    if arr.shape[0] != P.horizon:
        raise ValueError("need one a_k per time step")
    if np.any(arr < 0):
        raise NegativeProcess("a_k must be positive")
    masks = P.masks
    limit = masks[-1]
    lhs = np.zeros(P.space.size)
    rhs = np.zeros(P.space.size)
    deltas = P.deltas
    partial = np.zeros(P.space.size)
    for k in range(2, P.horizon + 1):
        lhs += np.where(~masks[k - 2], arr[k - 1], 0.0)
        partial = partial + arr[k - 1]
        rhs += np.where(deltas[k - 1], partial, 0.0)
    lhs = np.where(limit, lhs, 0.0)
    return Element(P.space, lhs), Element(P.space, rhs)
