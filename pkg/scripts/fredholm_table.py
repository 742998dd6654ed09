"""ln D_lambda(r) by the series and Nystrom routes, with the sigma-form residual.

    python3 scripts/fredholm_table.py --m 0.25 --rmax 6
"""
import argparse

import numpy as np

from p3confluence.fredholm import (
    FredholmConfig,
    TruncationBudgetExceeded,
    lambda_of_m,
    logdet_nystrom,
    logdet_series,
    sigma_and_prime,
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--m", type=complex, default=0.25)
    ap.add_argument("--rmax", type=float, default=6.0)
    ap.add_argument("--points", type=int, default=13)
    args = ap.parse_args()
    cfg = FredholmConfig(lambda_of_m(args.m))
    print(f"{'r':>6} {'|series-nystrom|':>17} {'sigma-form residual':>20}")
    for r in np.linspace(0.25, args.rmax, args.points):
        try:
            gap = f"{abs(logdet_series(r, cfg) - logdet_nystrom(r, cfg)):17.2e}"
        except TruncationBudgetExceeded:
            gap = f"{'-':>17}"
        res = abs(sigma_and_prime(r, cfg, need_logdet=False).sigma_form_residual())
        print(f"{r:6.2f} {gap} {res:20.2e}")


if __name__ == "__main__":
    main()
