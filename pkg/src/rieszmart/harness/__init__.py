from .config import HarnessConfig, trial_seed
from .generate import generate_random_martingale
from .suite import SuiteReport, run_checks, run_suite

__all__ = [
    "HarnessConfig",
    "SuiteReport",
    "generate_random_martingale",
    "run_checks",
    "run_suite",
    "trial_seed",
]
