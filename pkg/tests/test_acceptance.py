"""Acceptance criteria, one test per criterion.

Each test appends a "criterion N: ... PASS/FAIL" line that is printed in the
terminal summary.  Run directly with ``python3 tests/test_acceptance.py``.
"""
import logging
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from ccfixpoint.chart import ResidualSystem
from ccfixpoint.classify import labeled_class_count, monic_invariant, normalize_configuration, same_class
from ccfixpoint.model import ProblemSpec
from ccfixpoint.potential import centrality_residual
from ccfixpoint.solver import collinear_enumerate, random_search
from ccfixpoint.tables import REFERENCE_TABLES
from ccfixpoint.theory import (
    hermite_oracle,
    morse_equality_sum,
    moulton_count_check,
    mutual_sides,
    polynomial_ode_check,
    three_body_census,
    three_body_shape,
)

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # imported outside pytest
    ACCEPTANCE_LINES = []


def record(number: int, ok: bool, text: str):
    line = f"criterion {number}: {text} {'PASS' if ok else 'FAIL'}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def equal_search(n, attempts, seed=0):
    return timed(random_search, ProblemSpec.equal_masses(n), attempts, seed=seed)


def sorted_distances(z):
    z = np.asarray(z, dtype=complex)
    z = z - z.mean()
    z = z / math.sqrt(np.sum(np.abs(z) ** 2))
    i, j = np.triu_indices(z.size, 1)
    return np.sort(np.abs(z[i] - z[j]))


def match_table(report, n, tol):
    """For each reference row, whether a found class has the same invariants."""
    missing = []
    for ref in REFERENCE_TABLES[n]:
        if not any(abs(r.reduced_potential - ref.reduced_potential) < tol
                   and (r.morse_index, r.fp_index, r.isotropy_order) == (ref.morse_index, ref.fp_index, ref.isotropy)
                   for r in report.solutions):
            missing.append(ref.reduced_potential)
    return missing


# -- 1 -------------------------------------------------------------------------

def test_criterion_1_three_bodies():
    report, dt = equal_search(3, 500)
    got = sorted((round(r.reduced_potential, 8), r.morse_index, r.fp_index, r.isotropy_order)
                 for r in report.solutions)
    want = [(3.0, 0, 1, 3), (3.53553391, 1, -1, 2)]
    ok = (len(got) == 2
          and all(abs(g[0] - w[0]) < 1e-6 and g[1:] == w[1:] for g, w in zip(got, want))
          and dt < 5)
    assert record(1, ok, f"n=3: {len(got)} classes {got}, {dt:.1f} s"), got


# -- 2 -------------------------------------------------------------------------

def test_criterion_2_four_bodies():
    report, dt = equal_search(4, 5000)
    missing = match_table(report, 4, 1e-6)
    # the class at 8.19608063 (the one the reference lists with isotropy 1)
    ref = next(r for r in REFERENCE_TABLES[4] if abs(r.reduced_potential - 8.19608063) < 1e-8)
    hit = [r for r in report.solutions if abs(r.reduced_potential - ref.reduced_potential) < 1e-6]
    dist_err = (np.max(np.abs(sorted_distances(hit[0].configuration.points) - sorted_distances(ref.points)))
                if hit else math.inf)
    ok = len(report.solutions) == 4 and not missing and dist_err < 1e-5 and dt < 30
    assert record(2, ok, f"n=4: {len(report.solutions)} classes, missing {missing}, "
                         f"distance error {dist_err:.1e}, {dt:.1f} s")


# -- 3 -------------------------------------------------------------------------

def test_criterion_3_five_and_six_bodies():
    parts, ok, total = [], True, 0.0
    for n, target in ((5, Fraction(-1, 20)), (6, Fraction(1, 30))):
        report, dt = equal_search(n, 50_000)
        total += dt
        missing = match_table(report, n, 1e-5)
        s, _, _ = morse_equality_sum(report)
        ok &= not missing and s == target
        parts.append(f"n={n}: {len(report.solutions)} classes, missing {missing}, Morse sum {s}")
    ok &= total < 600
    assert record(3, ok, "; ".join(parts) + f", {total:.0f} s")


# -- 4 -------------------------------------------------------------------------

@pytest.mark.slow
def test_criterion_4_seven_bodies():
    report, dt = equal_search(7, 200_000)
    missing = [ref.reduced_potential for ref in REFERENCE_TABLES[7]
               if not any(abs(r.reduced_potential - ref.reduced_potential) < 1e-5 for r in report.solutions)]
    s, _, _ = morse_equality_sum(report)
    ok = not missing and s == Fraction(-1, 42) and dt < 3600
    assert record(4, ok, f"n=7: {len(report.solutions)} classes, missing {missing}, Morse sum {s}, {dt:.0f} s")


# -- 5 -------------------------------------------------------------------------

def test_criterion_5_moulton_suite():
    rng = np.random.default_rng(5)
    alphas = (-1.5, -2.5, -3.0)
    t0 = time.perf_counter()
    bad, worst, specs = [], -math.inf, 0
    for n in (3, 4, 5):
        for k in range(20):
            c = np.triu(rng.uniform(0.1, 3.0, (n, n)), 1)
            spec = ProblemSpec(rng.uniform(0.5, 2.0, n), c + c.T, alphas[k % 3])
            comps = collinear_enumerate(spec)
            verdict = moulton_count_check(spec, comps)
            top = max(ev.real.max() for comp in comps for ev in comp.eigenvalues) if n > 2 else -math.inf
            worst = max(worst, top)
            specs += 1
            if not verdict.passed or top >= 0:
                bad.append((n, k))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 120
    assert record(5, ok, f"moulton: {specs - len(bad)}/{specs} specs with one index-1 root per ordering, "
                         f"largest collinear eigenvalue {worst:.3f}, {dt:.0f} s"), bad


# -- 6 -------------------------------------------------------------------------

def _census_spec(rng):
    m = rng.uniform(0.2, 5.0, 3)
    c = np.zeros((3, 3))
    for i, j in ((0, 1), (0, 2), (1, 2)):
        v = 0.0
        while v == 0.0:
            v = rng.uniform(-2.0, 2.0)
        c[i, j] = c[j, i] = v
    alpha = float(rng.choice((-1.5, -2.0, -2.5, -3.0)))
    return ProblemSpec(m, c, alpha, "logarithmic" if alpha == -2.0 else "power")


def test_criterion_6_three_body_census():
    rng = np.random.default_rng(6)
    t0 = time.perf_counter()
    count_bad, shape_bad, worst, with_shape = [], [], 0.0, 0
    for k in range(200):
        spec = _census_spec(rng)
        census = three_body_census(spec)
        report = random_search(spec, 300, seed=k)
        noncol = [r for r in report.solutions if not r.collinear]
        found = sum(labeled_class_count(spec, r.configuration) for r in noncol)
        if found != census.predicted_noncollinear:
            count_bad.append(k)
        shape = three_body_shape(spec)
        if shape is not None and noncol:
            with_shape += 1
            d = mutual_sides(noncol[0].configuration)
            err = float(np.max(np.abs(d / d[2] - shape)))
            worst = max(worst, err)
            if err >= 1e-8:
                shape_bad.append(k)
    dt = time.perf_counter() - t0
    ok = not count_bad and not shape_bad and dt < 300
    assert record(6, ok, f"census: 200 specs, count mismatches {count_bad}, shape checked on {with_shape} "
                         f"(worst {worst:.1e}), {dt:.0f} s"), (count_bad, shape_bad)


# -- 7 -------------------------------------------------------------------------

def test_criterion_7_logarithmic():
    t0 = time.perf_counter()
    herm = max(centrality_residual(ProblemSpec.logarithmic_equal(n), hermite_oracle(n)) for n in range(2, 11))
    defects = []
    for n in (3, 4):
        report = random_search(ProblemSpec.logarithmic_equal(n), 300, seed=n)
        defects += [polynomial_ode_check(r.configuration) for r in report.solutions if not r.collinear]
    worst = max(defects)
    dt = time.perf_counter() - t0
    ok = herm < 1e-10 and worst < 1e-10 and dt < 60
    assert record(7, ok, f"log: hermite residual max {herm:.1e}, ODE defect max {worst:.1e} "
                         f"over {len(defects)} planar classes, {dt:.0f} s")


# -- 8 -------------------------------------------------------------------------

def _jacobian_error(rng):
    worst = 0.0
    for k in range(100):
        n = 3 + k % 4
        c = np.triu(rng.uniform(0.2, 2.0, (n, n)), 1)
        spec = ProblemSpec(rng.uniform(0.5, 2.0, n), c + c.T, float(rng.uniform(-3.5, -1.2)))
        chart = ResidualSystem(spec)
        while True:
            v = rng.normal(size=chart.dim)
            z = chart.embed(v[0::2] + 1j * v[1::2])
            i, j = np.triu_indices(n, 1)
            if np.abs(z[i] - z[j]).min() > 0.1:
                break
        J = chart.jacobian_real(v)
        h = 1e-6 * (1 + np.abs(v).max())
        fd = np.empty_like(J)
        for col in range(v.size):
            e = np.zeros_like(v)
            e[col] = h
            fd[:, col] = (chart.residual_real(v + e)[0] - chart.residual_real(v - e)[0]) / (2 * h)
        worst = max(worst, np.linalg.norm(J - fd) / np.linalg.norm(J))
    return worst


def _dedup_checks(rng):
    sound = True
    for _ in range(200):
        n = int(rng.integers(3, 8))
        z = rng.normal(size=n) + 1j * rng.normal(size=n)
        z -= z.mean()
        img = rng.uniform(0.2, 5) * np.exp(1j * rng.uniform(-np.pi, np.pi)) * z[rng.permutation(n)]
        if rng.random() < 0.5:
            img = img.conj()
        sound &= same_class(monic_invariant(z), monic_invariant(img))
    separated = True
    for n in range(3, 8):
        spec = ProblemSpec.equal_masses(n)
        keys = [monic_invariant(normalize_configuration(spec, r.configuration()).points) for r in REFERENCE_TABLES[n]]
        separated &= not any(same_class(keys[a], keys[b])
                             for a in range(len(keys)) for b in range(a + 1, len(keys)))
    return sound, separated


def test_criterion_8_numerical_consistency():
    rng = np.random.default_rng(8)
    t0 = time.perf_counter()
    jac_err = _jacobian_error(rng)
    sound, separated = _dedup_checks(rng)
    spec = ProblemSpec.equal_masses(5)
    one = random_search(spec, 1500, seed=3, threads=1)
    three = random_search(spec, 1500, seed=3, threads=3)
    deterministic = one.to_dict() == three.to_dict()
    lams = [r.lam for n in (3, 4, 5) for r in random_search(ProblemSpec.equal_masses(n), 1000, seed=n).solutions]
    lam_ok = all(lam > 0 for lam in lams)
    dt = time.perf_counter() - t0
    ok = jac_err < 1e-6 and sound and separated and deterministic and lam_ok and dt < 120
    assert record(8, ok, f"jacobian rel. error {jac_err:.1e}, dedup sound {sound}, separated {separated}, "
                         f"deterministic {deterministic}, lambda>0 on {len(lams)} classes {lam_ok}, {dt:.0f} s")


# -- 9 -------------------------------------------------------------------------

def test_criterion_9_findings():
    odd, axisless, total = [], [], 0
    for n in (3, 4, 5, 6):
        report = random_search(ProblemSpec.equal_masses(n), {3: 500, 4: 5000, 5: 5000, 6: 20_000}[n], seed=0)
        for r in report.solutions:
            total += 1
            if r.fp_index != (-1) ** r.morse_index:
                odd.append((n, r.reduced_potential))
            if r.isotropy_order > 1 and r.chiral:
                axisless.append((n, r.reduced_potential))
    # findings are reported, not enforced
    record(9, True, f"findings over {total} classes: fp index != (-1)^h at {odd or 'none'}; "
                    f"rotation without reflection axis at {axisless or 'none'}")


if __name__ == "__main__":
    logging.basicConfig(level=logging.ERROR)
    raise SystemExit(pytest.main([__file__, "-v", "-p", "no:cacheprovider"]))
