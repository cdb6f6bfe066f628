"""Measured ratios of every decomposition bound across a λ grid.

    python3 scripts/lambda_sweep.py --trials 300 --omega-size 12 --depth 5
    python3 scripts/lambda_sweep.py --signed --out sweep.json
"""

import argparse
import json

import numpy as np

from rieszmart.gundy import decomposition_report, gundy_decompose
from rieszmart.harness import HarnessConfig
from rieszmart.harness.suite import make_trial
from rieszmart.weaktype import MAXIMAL, SQUARE, weak_type_ratio
from rieszmart.gundy import ratio_of


def sweep(cfg: HarnessConfig) -> dict:
    table: dict[float, dict[str, float]] = {lam: {} for lam in cfg.lambda_grid}
    for i in range(cfg.trials):
        t = make_trial(cfg, i)
        for lam in cfg.lambda_grid:
            row = table[lam]
            d = gundy_decompose(t.f, lam)
            for name, rec in decomposition_report(d, t.f).items():
                row[name] = max(row.get(name, 0.0), rec.ratio)
            for L in (MAXIMAL, SQUARE):
                r = ratio_of(*weak_type_ratio(L, t.f, lam))
                key = f"weak_{L.name}"
                row[key] = max(row.get(key, 0.0), r)
    return {str(lam): row for lam, row in table.items()}


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--omega-size", type=int, default=12)
    p.add_argument("--depth", type=int, default=5)
    p.add_argument("--signed", action="store_true")
    p.add_argument("--lambdas", type=float, nargs="+", default=list(np.geomspace(0.05, 5, 9)))
    p.add_argument("--out")
    args = p.parse_args()
    cfg = HarnessConfig(
        seed=args.seed,
        omega_size=args.omega_size,
        depth=args.depth,
        trials=args.trials,
        lambda_grid=tuple(args.lambdas),
        nonneg_only=not args.signed,
        vary_shape=True,
    )
    table = sweep(cfg)
    keys = sorted(next(iter(table.values())))
    print("lambda    " + " ".join(f"{k[:11]:>11s}" for k in keys))
    for lam, row in table.items():
        print(f"{float(lam):<9.4g} " + " ".join(f"{row[k]:11.4f}" for k in keys))
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"config": cfg.to_json(), "max_ratios": table}, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
