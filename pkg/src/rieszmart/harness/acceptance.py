"""Fixed configurations for the acceptance run and its regression baselines."""

from __future__ import annotations

import json
from pathlib import Path

from .config import HarnessConfig
from .suite import run_checks

#: 1000 nonnegative martingales, omega <= 16, depth <= 6, four thresholds.
SWEEP = HarnessConfig(seed=42, omega_size=16, depth=6, trials=1000, vary_shape=True)
#: Hölder pairs: three exponents per trial.
HOLDER = HarnessConfig(seed=42, omega_size=8, depth=2, trials=500)
#: power-gap inequality pairs.
POWER_GAP = HarnessConfig(seed=42, omega_size=8, depth=2, trials=200)
#: randomized-sign chain, horizon <= 6.
CHAIN = HarnessConfig(seed=42, omega_size=16, depth=6, trials=500, vary_shape=True)

RECONSTRUCTION_CHECKS = ("gundy_reconstruction", "gundy_martingales")
BOUND_CHECKS = ("gundy_w_sup", "gundy_y_partial", "gundy_v_abs", "gundy_u_l1", "gundy_tau_count")
WEAK_TYPE_CHECKS = ("weaktype_maximal", "weaktype_square")
LEMMA_CHECKS = ("lemma_band_sup_delta", "lemma_threshold_positive", "abel_band_identity")
CHAIN_CHECKS = ("rademacher_step1", "maximal_vs_square_ratio")

#: allowed relative growth of a persisted max ratio
REGRESSION_SLACK = 0.05


def measure_baselines() -> dict:
    """Max ratios that later runs are compared against."""
    weak = run_checks(SWEEP, WEAK_TYPE_CHECKS)
    chain = run_checks(CHAIN, ("maximal_vs_square_ratio",))
    return {
        "weaktype_maximal": weak.check("weaktype_maximal").max_ratio,
        "weaktype_square": weak.check("weaktype_square").max_ratio,
        "maximal_vs_square_ratio": chain.check("maximal_vs_square_ratio").max_ratio,
    }


def write_baselines(path: str | Path) -> dict:
    data = measure_baselines()
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    return data


def regressed(current: float, baseline: float, slack: float = REGRESSION_SLACK) -> bool:
    return current > baseline * (1 + slack)
