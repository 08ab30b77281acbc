"""Attempt index at which each class is first found, for several seeds.

The census has no stopping rule, so the curve of discoveries against
attempts is the practical evidence that a search ran long enough.

    python3 scripts/discovery_curve.py --n 6 --attempts 50000 --seeds 0 1 2
"""
import argparse
import logging

from ccfixpoint.model import ProblemSpec
from ccfixpoint.solver import discovery_curve, random_search


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--attempts", type=int, default=20_000)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    args = ap.parse_args()
    logging.basicConfig(level=logging.ERROR)
    for seed in args.seeds:
        report = random_search(ProblemSpec.equal_masses(args.n), args.attempts, seed=seed)
        curve = discovery_curve(report)
        last = curve[-1][0] if curve else -1
        print(f"seed {seed}: {len(curve)} classes, last new class at attempt {last}")
        for attempt, u in curve:
            print(f"   {attempt:>8d}  {u:.8f}")


if __name__ == "__main__":
    main()
