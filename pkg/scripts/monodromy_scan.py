"""Worst residuals of the monodromy algebra over seeded random draws.

    python3 scripts/monodromy_scan.py --draws 1000 --seed 1
"""
import argparse

import numpy as np

from p3confluence.monodromy import (
    cplus_two_way_residual,
    cyclic_residuals,
    eigen_residuals,
    random_generic_counted,
    trace_identity_residuals,
    x_coords,
    y_coords,
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--draws", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    worst = dict.fromkeys(["trace", "eigen", "cyclic", "cplus", "d6", "d8"], 0.0)
    rejected = 0
    for _ in range(args.draws):
        d, k = random_generic_counted(rng)
        rejected += k
        worst["trace"] = max(worst["trace"], *trace_identity_residuals(d))
        worst["eigen"] = max(worst["eigen"], *eigen_residuals(d))
        worst["cyclic"] = max(worst["cyclic"], *cyclic_residuals(d))
        worst["cplus"] = max(worst["cplus"], cplus_two_way_residual(d))
        worst["d6"] = max(worst["d6"], x_coords(d).residual)
        worst["d8"] = max(worst["d8"], y_coords(d, 1).residual, y_coords(d, -1).residual)
    print(f"draws {args.draws}, rejected {rejected}")
    for k, v in worst.items():
        print(f"  {k:7s} {v:.2e}")


if __name__ == "__main__":
    main()
