from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ..errors import ConfigInvalid

#: Deepest martingale the generator builds; matches the sign-enumeration limit.
MAX_HORIZON = 14


@dataclass(frozen=True)
class HarnessConfig:
    """Settings for instance generation and the verification suite.

    With ``vary_shape`` each trial draws its own omega size in
    ``[1, omega_size]`` and depth in ``[1, depth]``.  ``corrupt`` breaks the
    projection consistency of every generated martingale (negative control).
    """

    seed: int = 42
    omega_size: int = 8
    depth: int = 4
    trials: int = 200
    lambda_grid: tuple = (0.25, 0.5, 1.0, 2.0)
    tol: float = 1e-9
    nonneg_only: bool = True
    out_path: str | None = None
    vary_shape: bool = False
    corrupt: bool = False
    holder_exponents: tuple = field(default=(1.25, 2.0, 4.0))

    def __post_init__(self):
        object.__setattr__(self, "lambda_grid", tuple(float(x) for x in self.lambda_grid))
        object.__setattr__(self, "holder_exponents", tuple(float(x) for x in self.holder_exponents))
        self.validate()

    def validate(self):
        if not 0 <= self.seed < 2**64:
            raise ConfigInvalid("seed must be a 64-bit unsigned integer")
        for name in ("omega_size", "depth", "trials"):
            if getattr(self, name) < 1:
                raise ConfigInvalid(f"{name} must be positive")
        if self.depth > MAX_HORIZON:
            raise ConfigInvalid(f"depth {self.depth} exceeds the maximum {MAX_HORIZON}")
        if not self.lambda_grid:
            raise ConfigInvalid("lambda grid is empty")
        if any(not (x > 0 and math.isfinite(x)) for x in self.lambda_grid):
            raise ConfigInvalid("lambda values must be positive and finite")
        if not self.tol > 0:
            raise ConfigInvalid("tolerance must be positive")
        if any(p <= 1 for p in self.holder_exponents):
            raise ConfigInvalid("Hölder exponents must exceed 1")

    def to_json(self) -> dict:
        out = asdict(self)
        out["lambda_grid"] = list(self.lambda_grid)
        out["holder_exponents"] = list(self.holder_exponents)
        return out


def trial_seed(seed: int, trial: int) -> int:
    """Seed for trial ``trial``: first 64-bit word of ``SeedSequence(seed, spawn_key=(trial,))``.

    Independent of execution order, so serial and parallel runs agree.
    """
    ss = np.random.SeedSequence(seed, spawn_key=(trial,))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
