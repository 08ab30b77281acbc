"""Search equal-mass Newtonian central configurations for n = 3..7 and compare
them with the reference census (reduced potential, indices, isotropy).

    python3 scripts/reproduce_tables.py --n 3 4 5 --attempts 20000
"""
import argparse
import logging
import time

from ccfixpoint.model import ProblemSpec
from ccfixpoint.output import report_to_table
from ccfixpoint.solver import random_search
from ccfixpoint.tables import REFERENCE_TABLES
from ccfixpoint.theory import morse_equality_sum

DEFAULT_ATTEMPTS = {3: 500, 4: 5000, 5: 50_000, 6: 50_000, 7: 200_000}


def compare(report, n, tol=1e-5):
    found = report.solutions
    rows = []
    for ref in REFERENCE_TABLES[n]:
        hit = [r for r in found if abs(r.reduced_potential - ref.reduced_potential) < tol]
        ok = any((r.morse_index, r.fp_index, r.isotropy_order) == (ref.morse_index, ref.fp_index, ref.isotropy)
                 for r in hit)
        rows.append((ref, ok))
    extra = [r for r in found
             if not any(abs(r.reduced_potential - ref.reduced_potential) < tol for ref in REFERENCE_TABLES[n])]
    return rows, extra


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--attempts", type=int, default=None)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--show", action="store_true", help="print the full table of each run")
    args = ap.parse_args()
    logging.basicConfig(level=logging.ERROR)

    for n in args.n:
        attempts = args.attempts or DEFAULT_ATTEMPTS.get(n, 50_000)
        t0 = time.perf_counter()
        report = random_search(ProblemSpec.equal_masses(n), attempts, seed=args.seed, threads=args.threads)
        dt = time.perf_counter() - t0
        rows, extra = compare(report, n)
        total, target, _ = morse_equality_sum(report)
        print(f"n={n}: {len(report.solutions)} classes in {dt:.1f} s "
              f"({attempts} attempts, {report.successes} converged), Morse sum {total} (target {target})")
        for ref, ok in rows:
            print(f"   {ref.reduced_potential:.8f}  h={ref.morse_index} fp={ref.fp_index:+d} "
                  f"iso={ref.isotropy}  {'found' if ok else 'MISSING'}")
        for r in extra:
            print(f"   {r.reduced_potential:.8f}  h={r.morse_index} fp={r.fp_index:+d} "
                  f"iso={r.isotropy_order}  not in the reference list")
        if args.show:
            print(report_to_table(report))


if __name__ == "__main__":
    main()
