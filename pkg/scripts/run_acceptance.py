"""Run the acceptance suite and print one line per criterion.

    python3 scripts/run_acceptance.py [--only GROUP ...]
"""
import argparse
import sys

from p3confluence.acceptance import run_criteria


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--only", nargs="*", default=None)
    args = ap.parse_args()
    results = run_criteria(only=set(args.only) if args.only else None)
    for r in results:
        print(r.line())
    return 0 if all(r.passed is not False for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
