"""Recompute the acceptance max ratios and store them in tests/data/baseline.json.

Run only when a change to the generator or checks is intended to move them.
"""

from pathlib import Path

from rieszmart.harness.acceptance import write_baselines

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "baseline.json"

if __name__ == "__main__":
    for name, value in write_baselines(OUT).items():
        print(f"{name:28s} {value:.6f}")
    print(f"wrote {OUT}")
