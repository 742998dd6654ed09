"""Confluence gaps |u_2j(z/2j) - U(z)| and |u_2j+1(z/(2j+1)) + 1/U(z)| for several m.

    python3 scripts/confluence_trend.py --z 0.1 --j 4,8,16,32
"""
import argparse
from fractions import Fraction

from p3confluence.asymptotics import fit_trend
from p3confluence.series import confluence_gap, d8_series, u0_of_m


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--z", type=complex, default=0.1)
    ap.add_argument("--j", default="4,8,16,32")
    ap.add_argument("--m", default="0,1/4,1/3,2/5")
    args = ap.parse_args()
    js = [int(t) for t in args.j.split(",")]
    print(f"{'m':>6} {'j':>4} {'gap_even':>12} {'gap_odd':>12}")
    for ms in args.m.split(","):
        m = Fraction(ms)
        U = d8_series(u0_of_m(float(m)))
        gaps = [confluence_gap(j, m, args.z, U=U) for j in js]
        for j, (ge, go) in zip(js, gaps):
            print(f"{ms:>6} {j:>4} {ge:12.4e} {go:12.4e}")
        pe = fit_trend(js, [g[0] for g in gaps]).rateEstimate
        po = fit_trend(js, [g[1] for g in gaps]).rateEstimate
        print(f"{ms:>6} rate even {pe:.3f}  odd {po:.3f}")


if __name__ == "__main__":
    main()
