"""JSON encodings for spaces, partitions, martingales, stopping times and step functions."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .expectation import Filtration, Partition, make_filtration
from .martingale import Martingale, StoppingTime
from .riemann import Partition1D, StepFunction
from .riesz_core import Element, SampleSpace, make_space

MARTINGALE_SCHEMA = "martingale/1"


def space_to_json(space: SampleSpace) -> dict:
    return {"weights": space.weights.tolist()}


def space_from_json(obj: dict) -> SampleSpace:
    return make_space(obj["weights"])


def element_to_json(f: Element) -> dict:
    return {"space": space_to_json(f.space), "values": f.tolist()}


def element_from_json(obj: dict, space: SampleSpace | None = None) -> Element:
    space = space or space_from_json(obj["space"])
    return Element(space, obj["values"])


def partition_to_json(p: Partition) -> list:
    return [list(b) for b in p.blocks]


def filtration_to_json(F: Filtration) -> list:
    return [partition_to_json(p) for p in F.levels]


def filtration_from_json(space: SampleSpace, obj: list) -> Filtration:
    return make_filtration(space, [Partition(space, tuple(map(tuple, blocks))) for blocks in obj])


def martingale_to_json(f: Martingale) -> dict:
    return {
        "schema": MARTINGALE_SCHEMA,
        "space": space_to_json(f.space),
        "filtration": filtration_to_json(f.filtration),
        "values": f.values.tolist(),
    }


def martingale_from_json(obj: dict) -> Martingale:
    if obj.get("schema", MARTINGALE_SCHEMA) != MARTINGALE_SCHEMA:
        raise ValueError(f"unsupported schema {obj.get('schema')!r}")
    space = space_from_json(obj["space"])
    F = filtration_from_json(space, obj["filtration"])
    return Martingale(F, np.array(obj["values"], dtype=float))


def stopping_time_to_json(P: StoppingTime) -> dict:
    out = {"masks": P.masks.tolist()}
    if P.initial.any():
        out["initial"] = P.initial.tolist()
    return out


def stopping_time_from_json(obj: dict, filtration: Filtration) -> StoppingTime:
    return StoppingTime(filtration.space, obj["masks"], filtration, obj.get("initial"))


def step_function_to_json(f: StepFunction) -> dict:
    return {
        "a": str(f.a),
        "b": str(f.b),
        "cuts": [str(c) for c in f.partition.cuts],
        "pieces": f.pieces.tolist(),
        "space": space_to_json(f.space),
    }


def step_function_from_json(obj: dict, space: SampleSpace | None = None) -> StepFunction:
    space = space or space_from_json(obj["space"])
    cuts = tuple(Fraction(c) for c in obj["cuts"])
    if cuts[0] != Fraction(obj["a"]) or cuts[-1] != Fraction(obj["b"]):
        raise ValueError("cuts must run from a to b")
    return StepFunction(Partition1D(cuts), space, obj["pieces"])
