"""Closed-form identities and counts used as checks and oracles.

* Morse equality for the reduced potential on shape space, in exact rational
  arithmetic.
* Generalized Moulton count: one collinear central configuration per
  ordering class when all coefficients share a sign.
* Three-body census: closed-form count and shape of the non-collinear
  solution, and bounds on the collinear ones.
* Logarithmic potential: Hermite zeros as collinear solutions and the
  polynomial differential relation at planar solutions.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .model import Configuration, ProblemSpec, SearchReport, SolutionRecord, labeled_weight
from .potential import as_points, inertia, lambda_estimate

log = logging.getLogger(__name__)


# -- Morse equality ------------------------------------------------------------

def euler_characteristic(n: int) -> int:
    """Euler characteristic (-1)^n (n-2)! of the shape space of n bodies."""
    if n < 3:
        raise ValueError("n must be at least 3")
    return (-1) ** n * math.factorial(n - 2)


def morse_target(n: int) -> Fraction:
    return Fraction((-1) ** n, n * (n - 1))


def morse_equality_sum(report: SearchReport | Iterable[SolutionRecord], n: int | None = None,
                       group_order: int | None = None) -> tuple[Fraction, Fraction, Fraction]:
    """(sum, target, sum - target) of (-1)^h(z) / i(z) over CC_1/SO(2).

    Chiral records count twice.  For problems whose symmetry group G is
    smaller than the full symmetric group each class carries the weight
    |G| / (i(z) n!), so the target stays (-1)^n / (n(n-1)).  Records flagged
    degenerate are left out with a warning.
    """
    if isinstance(report, SearchReport):
        records = report.solutions
        n = report.spec.n if n is None else n
        group_order = report.group_order if group_order is None else group_order
    else:
        records = list(report)
        if n is None:
            raise ValueError("n is required when passing bare records")
    group_order = math.factorial(n) if group_order is None else group_order
    total = Fraction(0)
    for r in records:
        if r.morse_degenerate:
            log.warning("degenerate record (u=%.8f) left out of the Morse sum", r.reduced_potential)
            continue
        total += (-1) ** r.morse_index * labeled_weight(r.isotropy_order, r.chiral, n, group_order)
    target = morse_target(n)
    return total, target, total - target


def morse_sum_from_table(entries: Iterable[tuple[int, int]]) -> Fraction:
    """Morse sum from (index, isotropy) pairs of achiral equal-mass classes."""
    return sum((Fraction((-1) ** h, i) for h, i in entries), Fraction(0))


# -- generalized Moulton count ----------------------------------------------

@dataclass
class MoultonVerdict:
    passed: bool
    skipped: bool
    components: int
    expected: int
    bad_components: list[tuple[int, ...]] = field(default_factory=list)
    reason: str = ""

    def __str__(self):
        if self.skipped:
            return f"moulton: skipped ({self.reason})"
        word = "PASS" if self.passed else "FAIL"
        return f"moulton: {self.components - len(self.bad_components)}/{self.expected} components " \
               f"with exactly one index-1 root {word}"


def moulton_count_check(spec: ProblemSpec, enumeration) -> MoultonVerdict:
    """Every one of the n!/2 ordering classes carries exactly one root of 1-D index 1.

    ``enumeration`` is the list returned by ``solver.collinear_enumerate``.
    Skipped when the hypotheses (alpha < -1, sign-definite coefficients)
    do not hold.
    """
    expected = math.factorial(spec.n) // 2
    if spec.alpha >= -1:
        return MoultonVerdict(False, True, 0, expected, reason="alpha >= -1")
    if not spec.sign_definite:
        return MoultonVerdict(False, True, 0, expected, reason="coefficients not sign-definite")
    bad = [c.ordering for c in enumeration if c.root_count != 1 or any(i != 1 for i in c.fp_indices)]
    ok = not bad and len(enumeration) == expected
    return MoultonVerdict(ok, False, len(enumeration), expected, bad)


# -- three bodies ----------------------------------------------------------------

class CollinearPrediction(str, enum.Enum):
    EXACTLY_3 = "exactly_3"
    AT_LEAST_1 = "at_least_1"
    EXACTLY_1 = "exactly_1"
    # one coefficient vanishes and the other two differ in sign: the
    # collinear fixed-point index is 0, so any count (including none) occurs
    UNCONSTRAINED = "unconstrained"
    DEGENERATE = "degenerate"

    def admits(self, count: int) -> bool:
        if self is CollinearPrediction.EXACTLY_3:
            return count == 3
        if self is CollinearPrediction.EXACTLY_1:
            return count == 1
        if self is CollinearPrediction.AT_LEAST_1:
            return count >= 1
        return True


@dataclass(frozen=True)
class ThreeBodyCensus:
    tilde_m: tuple[float, float, float]
    predicted_noncollinear: int
    predicted_collinear: CollinearPrediction
    boundary: bool = False  # a triangle inequality holds with equality

    def describe(self) -> str:
        return f"{self.predicted_noncollinear} non-collinear, {self.predicted_collinear.value} collinear"


def _tilde_m(spec: ProblemSpec) -> np.ndarray:
    if spec.n != 3:
        raise ValueError("three-body census needs n = 3")
    m, c = spec.masses, spec.coeffs
    return np.array([m[0] * c[1, 2], m[1] * c[0, 2], m[2] * c[0, 1]])


def _sides(tm: np.ndarray, alpha: float) -> np.ndarray:
    return np.abs(tm) ** (1.0 / abs(alpha))


def three_body_census(spec: ProblemSpec, rtol: float = 1e-12) -> ThreeBodyCensus:
    """Predicted numbers of non-collinear and collinear central configurations.

    Counts are of labeled classes modulo rotation, scaling and reflection.
    The non-collinear solution exists iff all m~_i = m_i m_jk are nonzero
    and of one sign and the numbers |m~_i|^(1/|alpha|) satisfy the strict
    triangle inequalities; equality is flagged as a boundary case and
    predicts none.
    """
    if spec.alpha >= -1:
        raise ValueError("census needs alpha < -1")
    tm = _tilde_m(spec)
    pair = spec.coeffs[[0, 0, 1], [1, 2, 2]]
    zero = pair == 0
    if zero.all():
        return ThreeBodyCensus(tuple(tm), 0, CollinearPrediction.DEGENERATE)
    if zero.sum() == 2:
        collinear = CollinearPrediction.EXACTLY_1
    elif zero.sum() == 1:
        rest = pair[~zero]
        same = np.sign(rest[0]) == np.sign(rest[1])
        collinear = CollinearPrediction.AT_LEAST_1 if same else CollinearPrediction.UNCONSTRAINED
    elif np.all(pair > 0) or np.all(pair < 0):
        collinear = CollinearPrediction.EXACTLY_3
    else:
        collinear = CollinearPrediction.AT_LEAST_1

    boundary = False
    noncollinear = 0
    if np.all(tm > 0) or np.all(tm < 0):
        x = _sides(tm, spec.alpha)
        slack = np.array([x[1] + x[2] - x[0], x[0] + x[2] - x[1], x[0] + x[1] - x[2]])
        tol = rtol * x.max()
        boundary = bool(np.any(np.abs(slack) <= tol))
        noncollinear = int(np.all(slack > tol))
    return ThreeBodyCensus(tuple(float(t) for t in tm), noncollinear, collinear, boundary)


def three_body_shape(spec: ProblemSpec) -> np.ndarray | None:
    """Mutual distances (|z2-z3|, |z1-z3|, |z1-z2|) of the non-collinear solution, scaled so the last is 1.

    None when the census predicts no non-collinear solution.
    """
    if three_body_census(spec).predicted_noncollinear != 1:
        return None
    x = _sides(_tilde_m(spec), spec.alpha)
    return x / x[2]


def mutual_sides(z) -> np.ndarray:
    """(|z2-z3|, |z1-z3|, |z1-z2|) of a 3-body configuration."""
    z = as_points(z)
    return np.abs(np.array([z[1] - z[2], z[0] - z[2], z[0] - z[1]]))


# -- logarithmic potential --------------------------------------------------

def hermite_zeros(n: int) -> np.ndarray:
    """Zeros of the physicists' Hermite polynomial H_n (Golub-Welsch)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return np.zeros(1)
    off = np.sqrt(np.arange(1, n) / 2.0)
    return eigvalsh_tridiagonal(np.zeros(n), off)


def hermite_oracle(n: int) -> Configuration:
    """Hermite zeros as a collinear configuration of the equal-mass logarithmic problem."""
    if n < 2:
        raise ValueError("n must be at least 2")
    x = hermite_zeros(n)
    x = x - x.mean()  # exact symmetry up to rounding
    return Configuration(x.astype(complex), ProblemSpec.logarithmic_equal(n))


def polynomial_ode_check(z: Configuration | np.ndarray, lam: float | None = None,
                         spec: ProblemSpec | None = None) -> float:
    """max_i |p''(z_i) + lam conj(z_i) p'(z_i)| / (1 + |p'(z_i)|) for p = prod (t - z_j).

    At a central configuration of the equal-mass logarithmic problem with
    w = lambda z one has p''(z_i) = 2 lambda conj(z_i) p'(z_i), so the
    default parameter is lam = -2 lambda, with lambda taken from the
    configuration itself (after scaling to unit inertia).
    """
    if isinstance(z, Configuration):
        spec = spec or z.spec
        pts = z.points
    else:
        pts = np.asarray(z, dtype=complex)
        spec = spec or ProblemSpec.logarithmic_equal(pts.size)
    if not np.all(spec.masses == spec.masses[0]):
        raise ValueError("polynomial check needs equal masses")
    pts = pts - pts.mean()
    pts = pts / math.sqrt(inertia(spec, pts))
    if lam is None:
        lam = -2.0 * lambda_estimate(spec, pts)
    p = np.poly1d(np.poly(pts))
    d1, d2 = p.deriv(1)(pts), p.deriv(2)(pts)
    return float(np.max(np.abs(d2 + lam * pts.conj() * d1) / (1.0 + np.abs(d1))))

