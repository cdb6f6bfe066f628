"""Weak-type inequalities for sequence operators of class 𝒜.

An operator maps a finite martingale to an Element (maximal function,
square function, and their compositions with a martingale transform).  The
class-𝒜 properties are measured empirically: for a sample of martingales the
smallest constant making each property hold is reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import BadLambda, CoefficientUnbounded, HorizonTooDeep
from .expectation import Partition, cond_exp, norm_p
from .gundy import ratio_of
from .martingale import (
    Martingale,
    TransformCoefficients,
    maximal,
    square_function,
    transform,
)
from .riesz_core import ZERO_TOL, BandMask, Element, band_of

SCHEMA = "weaktype/1"
MAX_SIGN_HORIZON = 14


@dataclass(frozen=True)
class SequenceOperator:
    name: str
    eval: Callable[[Martingale], Element]

    def __call__(self, f: Martingale) -> Element:
        return self.eval(f)


MAXIMAL = SequenceOperator("maximal", maximal)
SQUARE = SequenceOperator("square", square_function)


def transform_maximal(v: TransformCoefficients) -> SequenceOperator:
    return SequenceOperator("transform_maximal", lambda f: maximal(transform(f, v)))


def transform_square(v: TransformCoefficients) -> SequenceOperator:
    return SequenceOperator("transform_square", lambda f: square_function(transform(f, v)))


def overshoot_band(x: Element, lam: float) -> BandMask:
    """Band of ``(|x| - λe)^+``: components strictly above λ."""
    return BandMask(x.space, (np.abs(x.values) - lam) > ZERO_TOL)


def weak_type_lhs(Lf: Element, lam: float, T: Partition) -> Element:
    """``λ T P_{(|Lf| - λe)^+} e``."""
    if not lam > 0:
        raise BadLambda(f"λ must be positive, got {lam}")
    return lam * cond_exp(T, overshoot_band(Lf, lam).indicator)


def weak_type_ratio(L: SequenceOperator, f: Martingale, lam: float) -> tuple[Element, Element]:
    """``(λ T P_{(|Lf| - λe)^+} e, ||f||_1)`` with T = T_1."""
    lhs = weak_type_lhs(L(f), lam, f.filtration.level(1))
    return lhs, f.norm(1)


@dataclass
class MeasuredConstant:
    constant: float = 0.0
    samples: int = 0
    lhs: list = field(default_factory=list)
    rhs: list = field(default_factory=list)

    def add(self, lhs: Element, rhs: Element):
        self.samples += 1
        self.lhs.append(lhs.tolist())
        self.rhs.append(rhs.tolist())
        self.constant = max(self.constant, ratio_of(lhs, rhs))

    def to_json(self) -> dict:
        return {"constant": self.constant, "samples": self.samples}


@dataclass
class ClassAReport:
    operator: str
    quasi_linearity: MeasuredConstant = field(default_factory=MeasuredConstant)
    band_domination: MeasuredConstant = field(default_factory=MeasuredConstant)
    l1_increment: MeasuredConstant = field(default_factory=MeasuredConstant)
    l2: MeasuredConstant = field(default_factory=MeasuredConstant)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "operator": self.operator,
            "quasi_linearity": self.quasi_linearity.to_json(),
            "band_domination": self.band_domination.to_json(),
            "l1_increment": self.l1_increment.to_json(),
            "l2": self.l2.to_json(),
        }


def verify_class_a(L: SequenceOperator, sample: Sequence[Martingale]) -> ClassAReport:
    """Smallest constants making each class-𝒜 property hold on ``sample``.

    Quasi-linearity is measured over consecutive pairs that share a
    filtration.
    """
    sample = list(sample)
    if not sample:
        raise ValueError("empty sample")
    rep = ClassAReport(L.name)
    for f in sample:
        T = f.filtration.level(1)
        Lf = L(f)
        rep.band_domination.add(
            cond_exp(T, band_of(Lf).indicator), cond_exp(T, band_of(maximal(f)).indicator)
        )
        rep.l1_increment.add(
            cond_exp(T, abs(Lf)),
            cond_exp(T, Element(f.space, np.sum(np.abs(f.increments), axis=0))),
        )
        rep.l2.add(norm_p(T, Lf, 2), f.norm(2))
    for f, g in zip(sample, sample[1:]):
        if f.filtration != g.filtration:
            continue
        rep.quasi_linearity.add(abs(L(f + g)), abs(L(f)) + abs(L(g)))
    return rep


def transform_band_domination(
    f: Martingale, v: TransformCoefficients, M: float
) -> tuple[BandMask, BandMask, BandMask]:
    """Bands of h*, f* and S(h) for ``h = Σ v_k Δf_k`` with ``|v_k| <= M``."""
    if v.bound() > M * (1 + 1e-12):
        raise CoefficientUnbounded(f"coefficients reach {v.bound()}, bound is {M}")
    h = transform(f, v)
    return band_of(maximal(h)), band_of(maximal(f)), band_of(square_function(h))


def sign_patterns(n: int) -> np.ndarray:
    """All of {±1}^n, row j matching the Rademacher values on dyadic cell j."""
    # r_k is +1 on cell j iff bit (n - k) of j is 0
    j = np.arange(2**n)[:, None]
    bits = (j >> (n - 1 - np.arange(n))[None, :]) & 1
    return np.where(bits == 0, 1.0, -1.0)


@dataclass(frozen=True)
class RademacherBound:
    avg: Element
    sq: Element
    maxavg: Element


def rademacher_randomized_bound(f: Martingale) -> RademacherBound:
    """Randomized-sign averages of a martingale against its square function.

    ``avg = ∫_0^1 T|Σ_k r_k(t) Δf_k| dt``, ``maxavg = ∫_0^1 sup_n T|Σ_{k<=n} r_k(t) Δf_k| dt``
    and ``sq = T S(f)``.  The Rademacher functions are constant on the 2^N
    dyadic cells, so each integral is an exact average over sign patterns.
    """
    N = f.horizon
    if N > MAX_SIGN_HORIZON:
        raise HorizonTooDeep(f"horizon {N} exceeds {MAX_SIGN_HORIZON}")
    T = f.filtration.level(1)
    signs = sign_patterns(N)  # (2^N, N)
    partial = np.cumsum(signs[:, :, None] * f.increments[None, :, :], axis=1)
    Tabs = T.average(np.abs(partial))  # (2^N, N, n)
    avg = Tabs[:, -1, :].mean(axis=0)
    maxavg = Tabs.max(axis=1).mean(axis=0)
    sq = cond_exp(T, square_function(f))
    return RademacherBound(Element(f.space, avg), sq, Element(f.space, maxavg))


def sign_transform_bound(f: Martingale, lam: float) -> tuple[Element, Element]:
    """``(λ T P_{(f* - λe)^+} e, ||S(f)||_1)``: the maximal function against the square function."""
    T = f.filtration.level(1)
    return weak_type_lhs(maximal(f), lam, T), cond_exp(T, square_function(f))


def lambda_grid_ratios(
    L: SequenceOperator, f: Martingale, lambdas: Sequence[float]
) -> list[tuple[float, Element, Element]]:
    return [(lam, *weak_type_ratio(L, f, lam)) for lam in lambdas]

