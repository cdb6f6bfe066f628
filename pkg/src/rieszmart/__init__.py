"""Martingale decompositions and weak-type inequalities on finite Riesz-space models."""

from .errors import RieszError
from .expectation import (
    Filtration,
    Partition,
    cond_exp,
    make_filtration,
    martingale_norm_p,
    norm_p,
)
from .gundy import GundyDecomposition, decomposition_report, gundy_decompose
from .martingale import (
    Martingale,
    StoppingTime,
    TransformCoefficients,
    is_martingale,
    krickeberg,
    martingale_from_terminal,
    maximal,
    square_function,
    stopped_process,
    threshold_stopping_time,
    transform,
)
from .riesz_core import BandMask, Element, SampleSpace, make_space

__all__ = [
    "BandMask",
    "Element",
    "Filtration",
    "GundyDecomposition",
    "Martingale",
    "Partition",
    "RieszError",
    "SampleSpace",
    "StoppingTime",
    "TransformCoefficients",
    "cond_exp",
    "decomposition_report",
    "gundy_decompose",
    "is_martingale",
    "krickeberg",
    "make_filtration",
    "make_space",
    "martingale_from_terminal",
    "martingale_norm_p",
    "maximal",
    "norm_p",
    "square_function",
    "stopped_process",
    "threshold_stopping_time",
    "transform",
]
