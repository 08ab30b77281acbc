"""Three-body census: closed-form predictions against the numerical search.

Random masses in [0.2, 5], coefficients in [-2, 2] without 0 and
alpha in {-1.5, -2, -2.5, -3} (alpha = -2 uses the logarithmic kind).

    python3 scripts/census_sweep.py --specs 200
"""
import argparse
import logging
import time
from collections import Counter

import numpy as np

from ccfixpoint.classify import labeled_class_count
from ccfixpoint.model import ProblemSpec
from ccfixpoint.solver import collinear_enumerate, random_search
from ccfixpoint.theory import mutual_sides, three_body_census, three_body_shape

ALPHAS = (-1.5, -2.0, -2.5, -3.0)


def random_spec(rng):
    m = rng.uniform(0.2, 5.0, 3)
    c = np.zeros((3, 3))
    for i, j in ((0, 1), (0, 2), (1, 2)):
        v = 0.0
        while v == 0.0:
            v = rng.uniform(-2.0, 2.0)
        c[i, j] = c[j, i] = v
    alpha = float(rng.choice(ALPHAS))
    kind = "logarithmic" if alpha == -2.0 else "power"
    return ProblemSpec(m, c, alpha, kind)


def run_one(spec, attempts, seed):
    census = three_body_census(spec)
    report = random_search(spec, attempts, seed=seed)
    noncol = [r for r in report.solutions if not r.collinear]
    found = sum(labeled_class_count(spec, r.configuration) for r in noncol)
    collinear_roots = sum(c.root_count for c in collinear_enumerate(spec))
    shape_err = None
    shape = three_body_shape(spec)
    if shape is not None and noncol:
        d = mutual_sides(noncol[0].configuration)
        shape_err = float(np.max(np.abs(d / d[2] - shape)))
    return census, found, collinear_roots, shape_err


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--specs", type=int, default=200)
    ap.add_argument("--attempts", type=int, default=300)
    ap.add_argument("--seed", type=int, default=11)
    args = ap.parse_args()
    logging.basicConfig(level=logging.ERROR)
    rng = np.random.default_rng(args.seed)
    t0 = time.perf_counter()
    tally, mismatches, worst_shape = Counter(), 0, 0.0
    for k in range(args.specs):
        spec = random_spec(rng)
        census, found, col, err = run_one(spec, args.attempts, k)
        tally[(census.predicted_noncollinear, census.predicted_collinear.value)] += 1
        ok = found == census.predicted_noncollinear and census.predicted_collinear.admits(col)
        if err is not None:
            worst_shape = max(worst_shape, err)
        if not ok:
            mismatches += 1
            print(f"spec {k}: predicted {census.describe()}, found {found} non-collinear, {col} collinear")
    print(f"{args.specs} specs in {time.perf_counter() - t0:.1f} s, {mismatches} mismatches, "
          f"worst shape error {worst_shape:.2e}")
    for key, cnt in sorted(tally.items()):
        print(f"   predicted {key[0]} non-collinear / {key[1]} collinear: {cnt} specs")


if __name__ == "__main__":
    main()
