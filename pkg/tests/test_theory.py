import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ccfixpoint.model import ProblemSpec
from ccfixpoint.potential import centrality_residual
from ccfixpoint.solver import collinear_enumerate, random_search
from ccfixpoint.tables import REFERENCE_TABLES, reference_morse_sum
from ccfixpoint.theory import (
    CollinearPrediction,
    euler_characteristic,
    hermite_oracle,
    hermite_zeros,
    morse_equality_sum,
    morse_sum_from_table,
    morse_target,
    moulton_count_check,
    mutual_sides,
    polynomial_ode_check,
    three_body_census,
    three_body_shape,
)


def three_spec(c12=1.0, c13=1.0, c23=1.0, masses=(1.0, 1.0, 1.0), alpha=-3.0):
    c = np.array([[0, c12, c13], [c12, 0, c23], [c13, c23, 0]], float)
    return ProblemSpec(masses=np.array(masses, float), coeffs=c, alpha=alpha)


@pytest.mark.parametrize("n, chi", [(3, -1), (4, 2), (5, -6), (6, 24), (7, -120)])
def test_euler_characteristic(n, chi):
    assert euler_characteristic(n) == chi
    assert morse_target(n) == Fraction(chi, math.factorial(n))


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_morse_sum_of_reference_census(n):
    entries = [(r.morse_index, r.isotropy) for r in REFERENCE_TABLES[n]]
    assert morse_sum_from_table(entries) == morse_target(n) == reference_morse_sum(n)


def test_morse_sum_from_search():
    report = random_search(ProblemSpec.equal_masses(4), 3000, seed=2)
    total, target, resid = morse_equality_sum(report)
    assert total == target == Fraction(1, 12) and resid == 0
    # dropping one class breaks the identity
    assert morse_equality_sum(report.solutions[1:], n=4)[2] != 0


@pytest.mark.parametrize("n", [4, 5])
def test_moulton_equal_masses(n):
    spec = ProblemSpec.equal_masses(n)
    verdict = moulton_count_check(spec, collinear_enumerate(spec))
    assert verdict.passed and verdict.components == math.factorial(n) // 2
    assert "PASS" in str(verdict)


def test_moulton_random_masses():
    rng = np.random.default_rng(11)
    spec = ProblemSpec.newtonian(rng.uniform(0.1, 10, 5), alpha=-2.5)
    assert moulton_count_check(spec, collinear_enumerate(spec)).passed


def test_moulton_skips_when_hypotheses_fail():
    spec = three_spec(c12=-1.0)
    v = moulton_count_check(spec, [])
    assert v.skipped and not v.passed and "skipped" in str(v)
    assert moulton_count_check(ProblemSpec.equal_masses(3, alpha=-0.5), []).skipped


def test_census_newtonian():
    cen = three_body_census(ProblemSpec.equal_masses(3))
    assert cen.predicted_noncollinear == 1 and cen.predicted_collinear is CollinearPrediction.EXACTLY_3
    assert not cen.boundary


def test_census_mixed_signs():
    cen = three_body_census(three_spec(c12=-1.0))
    assert cen.predicted_noncollinear == 0
    assert cen.predicted_collinear is CollinearPrediction.AT_LEAST_1


def test_census_triangle_inequality_fails():
    # m~ = (8, 1, 1): sides 2, 1, 1 at alpha=-3 sit exactly on the boundary
    cen = three_body_census(three_spec(c23=8.0))
    assert cen.predicted_noncollinear == 0 and cen.boundary
    cen = three_body_census(three_spec(c23=27.0))
    assert cen.predicted_noncollinear == 0 and not cen.boundary


def test_census_shape_matches_solver():
    spec = three_spec(c23=1 / 8)
    np.testing.assert_allclose(three_body_shape(spec), [0.5, 1, 1], rtol=1e-15)
    report = random_search(spec, 300, seed=0)
    tri = [r for r in report.solutions if not r.collinear]
    assert len(tri) == 1
    s = mutual_sides(tri[0].configuration)
    np.testing.assert_allclose(s / s[2], [0.5, 1, 1], atol=1e-10)


def test_census_degenerate_and_single_pair():
    assert three_body_census(three_spec(0.0, 0.0, 0.0)).predicted_collinear is CollinearPrediction.DEGENERATE
    cen = three_body_census(three_spec(1.0, 0.0, 0.0))
    assert cen.predicted_collinear is CollinearPrediction.EXACTLY_1 and cen.predicted_noncollinear == 0
    with pytest.raises(ValueError):
        three_body_census(ProblemSpec.equal_masses(4))


@pytest.mark.parametrize("pred, yes, no", [
    (CollinearPrediction.EXACTLY_3, 3, 2),
    (CollinearPrediction.AT_LEAST_1, 2, 0),
    (CollinearPrediction.EXACTLY_1, 1, 3),
])
def test_prediction_admits(pred, yes, no):
    assert pred.admits(yes) and not pred.admits(no)
    assert CollinearPrediction.UNCONSTRAINED.admits(0)


def test_hermite_small_cases():
    np.testing.assert_allclose(hermite_zeros(2), [-1 / math.sqrt(2), 1 / math.sqrt(2)], rtol=1e-14)
    np.testing.assert_allclose(hermite_zeros(3), [-math.sqrt(1.5), 0, math.sqrt(1.5)], atol=1e-14)


@pytest.mark.parametrize("n", range(2, 11))
def test_hermite_oracle_is_central(n):
    z = hermite_oracle(n)
    assert centrality_residual(z.spec, z) < 1e-12
    # Hermite polynomial of degree n vanishes there (numpy's hermite basis is the physicists' one)
    coef = np.zeros(n + 1)
    coef[-1] = 1
    vals = np.polynomial.hermite.hermval(z.points.real, coef)
    assert np.max(np.abs(vals)) < 1e-8 * math.factorial(n) * 2 ** n


def test_ode_at_log_solutions(omega):
    assert polynomial_ode_check(np.array([1, omega, omega ** 2])) < 1e-12
    assert polynomial_ode_check(hermite_oracle(4)) < 1e-12
    z = hermite_oracle(4).points + np.array([0, 0.05j, 0, 0])
    assert polynomial_ode_check(z) > 1e-3


@given(st.integers(3, 6), st.floats(-math.pi, math.pi), st.floats(0.1, 10))
def test_ode_is_similarity_invariant(n, theta, scale):
    z = scale * np.exp(1j * theta) * hermite_oracle(n).points + (0.3 - 2j)
    assert polynomial_ode_check(z) < 1e-9
