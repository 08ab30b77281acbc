"""Command line: ``ccfixpoint search`` and ``ccfixpoint verify``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import output
from .classify import labeled_class_count
from .model import ProblemSpec, SearchReport, SpecError, validate_spec
from .potential import centrality_residual
from .solver import (
    SearchOptions,
    SolveOptions,
    collinear_enumerate,
    collinear_report,
    default_threads,
    random_search,
)
from .theory import (
    hermite_oracle,
    morse_equality_sum,
    moulton_count_check,
    polynomial_ode_check,
    three_body_census,
)

log = logging.getLogger("ccfixpoint")

EXIT_OK, EXIT_CHECK_FAILED, EXIT_SPEC = 0, 1, 2
MOULTON_MAX_N = 7  # n!/2 components; beyond this the check gets slow


@dataclass
class CheckLine:
    name: str
    status: str  # PASS, FAIL, SKIP, FINDING or INFO
    text: str

    @property
    def hard_failure(self) -> bool:
        return self.status == "FAIL"

    def __str__(self):
        return self.text


# -- checks ------------------------------------------------------------------

def _morse_check(report: SearchReport) -> CheckLine:
    total, target, _ = morse_equality_sum(report)
    if any(r.morse_degenerate for r in report.solutions):
        return CheckLine("morse-sum", "SKIP",
                         f"morse-sum {total} vs {target} SKIP (degenerate classes present)")
    ok = total == target
    return CheckLine("morse-sum", "PASS" if ok else "FAIL",
                     f"morse-sum {total} {'==' if ok else '!='} {target} {'PASS' if ok else 'FAIL'}")


def _centrality_check(report: SearchReport, tol: float = 1e-10) -> CheckLine:
    worst = max((centrality_residual(report.spec, r.configuration) for r in report.solutions), default=0.0)
    ok = worst < tol
    return CheckLine("centrality", "PASS" if ok else "FAIL",
                     f"centrality residual max {worst:.2e} < {tol:g} {'PASS' if ok else 'FAIL'}")


def _lambda_check(report: SearchReport) -> CheckLine:
    if not report.spec.all_positive:
        return CheckLine("lambda", "SKIP", "lambda > 0 SKIP (coefficients not all positive)")
    bad = [r.lam for r in report.solutions if not r.lam > 0]
    ok = not bad
    return CheckLine("lambda", "PASS" if ok else "FAIL",
                     f"lambda > 0 on {len(report.solutions) - len(bad)}/{len(report.solutions)} classes "
                     f"{'PASS' if ok else 'FAIL'}")


def _moulton_check(spec: ProblemSpec) -> CheckLine:
    if spec.alpha >= -1 or not spec.sign_definite:
        verdict = moulton_count_check(spec, [])
        return CheckLine("moulton", "SKIP", str(verdict))
    if spec.n > MOULTON_MAX_N:
        return CheckLine("moulton", "SKIP", f"moulton: skipped (n > {MOULTON_MAX_N})")
    verdict = moulton_count_check(spec, collinear_enumerate(spec))
    return CheckLine("moulton", "PASS" if verdict.passed else "FAIL", str(verdict))


def _census_check(report: SearchReport) -> CheckLine:
    spec = report.spec
    cen = three_body_census(spec)
    noncol = sum(labeled_class_count(spec, r.configuration) for r in report.solutions if not r.collinear)
    col = sum(labeled_class_count(spec, r.configuration) for r in report.solutions if r.collinear)
    ok = noncol == cen.predicted_noncollinear and cen.predicted_collinear.admits(int(col))
    word = "matched" if ok else f"MISMATCH (predicted {cen.describe()})"
    return CheckLine("census", "PASS" if ok else "FAIL",
                     f"census: {noncol} non-collinear, {col} collinear, {word}")


def _log_checks(report: SearchReport, tol: float = 1e-10) -> list[CheckLine]:
    n = report.spec.n
    res = centrality_residual(ProblemSpec.logarithmic_equal(n), hermite_oracle(n))
    out = [CheckLine("hermite", "PASS" if res < tol else "FAIL",
                     f"hermite zeros n={n}: centrality residual {res:.2e} {'PASS' if res < tol else 'FAIL'}")]
    defects = [polynomial_ode_check(r.configuration) for r in report.solutions]
    worst = max(defects, default=0.0)
    out.append(CheckLine("ode", "PASS" if worst < tol else "FAIL",
                         f"polynomial ODE defect max {worst:.2e} over {len(defects)} classes "
                         f"{'PASS' if worst < tol else 'FAIL'}"))
    return out


def _findings(report: SearchReport) -> list[CheckLine]:
    out = []
    sols = report.solutions
    odd = [r for r in sols if r.fp_index != (-1) ** r.morse_index]
    if odd:
        for r in odd:
            out.append(CheckLine("fp-vs-morse", "FINDING",
                                 f"FINDING fp index {r.fp_index} != (-1)^{r.morse_index} at u={r.reduced_potential:.8f}"))
    else:
        out.append(CheckLine("fp-vs-morse", "INFO",
                             f"finding: fp index == (-1)^(morse index) on all {len(sols)} classes"))
    rot = [r for r in sols if r.isotropy_order > 1]
    pure = [r for r in rot if r.chiral]
    if pure:
        for r in pure:
            out.append(CheckLine("rotation-axis", "FINDING",
                                 f"FINDING isotropy {r.isotropy_order} without reflection axis at "
                                 f"u={r.reduced_potential:.8f}"))
    else:
        out.append(CheckLine("rotation-axis", "INFO",
                             f"finding: all {len(rot)} rotationally symmetric classes have a reflection axis"))
    return out


def run_checks(report: SearchReport, moulton: bool = True) -> list[CheckLine]:
    """All applicable checks for a report; the problem is taken from the report."""
    spec = report.spec
    lines = [_centrality_check(report), _lambda_check(report), _morse_check(report)]
    if moulton:
        lines.append(_moulton_check(spec))
    if spec.n == 3 and spec.alpha < -1:
        lines.append(_census_check(report))
    if spec.is_log and np.all(spec.masses == spec.masses[0]) and np.all(spec.pair_coeffs == 1):
        lines += _log_checks(report)
    lines += _findings(report)
    report.checks = {c.name: {"status": c.status, "text": c.text} for c in lines}
    return lines


# -- argument handling ---------------------------------------------------------

def spec_from_args(args) -> ProblemSpec:
    preset = args.preset
    if args.spec:
        if preset not in (None, "custom"):
            raise SpecError("--spec cannot be combined with a preset other than custom")
        try:
            data = json.loads(Path(args.spec).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise SpecError(f"cannot read spec file {args.spec}: {exc}") from exc
        if args.alpha is not None:
            data["alpha"] = args.alpha
        return ProblemSpec.from_dict(data)
    if preset == "custom":
        raise SpecError("--preset custom needs --spec FILE")
    if args.n is None:
        raise SpecError("--n is required with a preset")
    if preset == "log-equal":
        return ProblemSpec.logarithmic_equal(args.n)
    return ProblemSpec.equal_masses(args.n, -3.0 if args.alpha is None else args.alpha)


def _add_spec_args(p: argparse.ArgumentParser):
    p.add_argument("--n", type=int, help="number of bodies (with a preset)")
    p.add_argument("--preset", choices=["newton-equal", "log-equal", "custom"], default=None,
                   help="problem preset (default newton-equal unless --spec is given)")
    p.add_argument("--spec", help="JSON problem-spec file")
    p.add_argument("--alpha", type=float, help="force exponent (power kind; default -3)")


def _add_search_args(p: argparse.ArgumentParser):
    p.add_argument("--attempts", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: $CCFIX_THREADS or 1)")
    p.add_argument("--tol-root", type=float, default=SolveOptions.tol_root)
    p.add_argument("--tol-dedup", type=float, default=SearchOptions.tol_dedup)
    p.add_argument("--collinear-only", action="store_true",
                   help="enumerate collinear solutions per ordering instead of a random search")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ccfixpoint",
                                 description="Find and verify planar central configurations.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("search", help="random multistart search for central configurations")
    _add_spec_args(s)
    _add_search_args(s)
    s.add_argument("--format", choices=sorted(output.FORMATS), default="table")
    s.add_argument("--out", help="output file (default stdout)")
    s.add_argument("--figures", metavar="DIR", help="write one SVG per class into DIR")
    s.add_argument("--verify", action="store_true", help="run the checks and store them in the report")

    v = sub.add_parser("verify", help="check a saved JSON report, or a live search")
    v.add_argument("report", nargs="?", help="JSON report written by 'search --format json'")
    _add_spec_args(v)
    _add_search_args(v)
    v.add_argument("--no-moulton", action="store_true", help="skip the per-ordering collinear check")
    return ap


def _search(spec: ProblemSpec, args) -> SearchReport:
    opts = SearchOptions(solve=replace(SolveOptions(), tol_root=args.tol_root), tol_dedup=args.tol_dedup)
    if args.collinear_only:
        return collinear_report(spec, collinear_enumerate(spec, opts.solve))
    threads = args.threads if args.threads is not None else default_threads()
    return random_search(spec, args.attempts, seed=args.seed, threads=threads, opts=opts)


def run_search(args) -> int:
    try:
        spec = validate_spec(spec_from_args(args))
    except SpecError as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    t0 = time.perf_counter()
    report = _search(spec, args)
    log.info("search finished in %.2f s", time.perf_counter() - t0)
    code = EXIT_OK
    if args.verify:
        lines = run_checks(report)
        for c in lines:
            print(c, file=sys.stderr)
        code = EXIT_CHECK_FAILED if any(c.hard_failure for c in lines) else EXIT_OK
    text = output.render(report, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.figures:
        output.write_figures(report, args.figures)
    return code


def run_verify(args) -> int:
    if args.report:
        try:
            report = output.report_from_json(Path(args.report).read_text())
        except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
            print(f"cannot read report {args.report}: {exc}", file=sys.stderr)
            return EXIT_SPEC
    else:
        try:
            spec = validate_spec(spec_from_args(args))
        except SpecError as exc:
            print(f"spec error: {exc}", file=sys.stderr)
            return EXIT_SPEC
        report = _search(spec, args)
    lines = run_checks(report, moulton=not args.no_moulton)
    for c in lines:
        print(c)
    return EXIT_CHECK_FAILED if any(c.hard_failure for c in lines) else EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "search":
        return run_search(args)
    return run_verify(args)


if __name__ == "__main__":
    sys.exit(main())
