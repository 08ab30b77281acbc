import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ccfixpoint.model import ProblemSpec
from ccfixpoint.potential import (
    CollisionError,
    centrality_residual,
    force_map_w,
    inertia,
    lambda_estimate,
    pair_phi,
    potential_gradient,
    reduced_potential,
    reduced_potential_hessian,
    total_potential,
)

NEWTON3 = ProblemSpec.equal_masses(3)


def tri(omega):
    return np.array([omega, 1.0, omega ** 2])


def test_pair_phi_values():
    assert pair_phi(NEWTON3, 1.0) == 1.0
    assert pair_phi(ProblemSpec.logarithmic_equal(3), 1.0) == 0.0
    assert pair_phi(NEWTON3, math.sqrt(3)) == pytest.approx(0.5773503, abs=1e-7)
    with pytest.raises(CollisionError):
        pair_phi(NEWTON3, 0.0)


def test_potential_hand_values(omega):
    assert total_potential(NEWTON3, tri(omega)) == pytest.approx(math.sqrt(3), rel=1e-14)
    assert total_potential(NEWTON3, np.array([-1, 0, 1], complex)) == pytest.approx(2.5, rel=1e-15)
    two = ProblemSpec.logarithmic_equal(2)
    assert total_potential(two, np.array([-0.5, 0.5], complex)) == 0.0
    with pytest.raises(CollisionError):
        total_potential(NEWTON3, np.array([1, 1, -2], complex))


def test_inertia_values(omega):
    assert inertia(NEWTON3, tri(omega)) == pytest.approx(3.0)
    assert inertia(NEWTON3, np.array([-1, 0, 1], complex)) == 2.0


def test_w_and_lambda(omega):
    z = tri(omega)
    np.testing.assert_allclose(force_map_w(NEWTON3, z), z / math.sqrt(3), atol=1e-15)
    assert lambda_estimate(NEWTON3, z) == pytest.approx(1 / math.sqrt(3), rel=1e-14)
    zc = np.array([-1, 0, 1], complex)
    np.testing.assert_allclose(force_map_w(NEWTON3, zc), [-1.25, 0, 1.25], atol=1e-15)
    assert lambda_estimate(NEWTON3, zc) == pytest.approx(1.25, rel=1e-15)


def test_lambda_is_u_over_i_not_twice(omega):
    # the Rayleigh quotient equals U/I for unordered-pair U
    z = tri(omega)
    lam = lambda_estimate(NEWTON3, z)
    assert lam == pytest.approx(total_potential(NEWTON3, z) / inertia(NEWTON3, z), rel=1e-14)
    assert abs(lam - 2 * total_potential(NEWTON3, z) / inertia(NEWTON3, z)) > 0.1


def test_log_lambda_equal_masses():
    rng = np.random.default_rng(1)
    for n in (3, 5, 8):
        spec = ProblemSpec.logarithmic_equal(n)
        z = rng.normal(size=n) + 1j * rng.normal(size=n)
        z -= z.mean()
        z /= math.sqrt(inertia(spec, z))
        assert lambda_estimate(spec, z) == pytest.approx(n * (n - 1) / 2, rel=1e-12)


def test_reduced_potential_reference_values(omega):
    assert reduced_potential(NEWTON3, tri(omega)) == pytest.approx(3.0, abs=1e-8)
    assert reduced_potential(NEWTON3, np.array([-1, 0, 1], complex)) == pytest.approx(3.53553391, abs=1e-8)
    z = np.array([0, 1, 1j, -1, -1j])
    assert reduced_potential(ProblemSpec.equal_masses(5), z) == pytest.approx(15.65685425, abs=1e-8)


def test_centrality_residual(omega):
    assert centrality_residual(NEWTON3, tri(omega)) < 1e-14
    assert centrality_residual(NEWTON3, np.array([-1, 0, 1], complex)) < 1e-14
    z = np.array([-1, 0.1, 0.9], complex)
    assert centrality_residual(NEWTON3, z) > 1e-3


def random_config(rng, n):
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    return z - z.mean()


@given(st.integers(3, 7), st.integers(0, 10_000), st.floats(0.1, 10.0), st.floats(-math.pi, math.pi))
def test_homogeneity_and_equivariance(n, seed, c, theta):
    spec = ProblemSpec.equal_masses(n, alpha=-2.5)
    z = random_config(np.random.default_rng(seed), n)
    w = force_map_w(spec, z)
    np.testing.assert_allclose(force_map_w(spec, c * z), c ** (spec.alpha + 1) * w, rtol=1e-10, atol=1e-12)
    rot = np.exp(1j * theta)
    np.testing.assert_allclose(force_map_w(spec, rot * z), rot * w, rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(force_map_w(spec, z.conj()), w.conj(), rtol=1e-10, atol=1e-12)
    u = reduced_potential(spec, z)
    assert reduced_potential(spec, c * rot * z) == pytest.approx(u, rel=1e-10)
    assert centrality_residual(spec, c * z) == pytest.approx(centrality_residual(spec, z), rel=1e-8, abs=1e-14)


@given(st.integers(3, 6), st.integers(0, 10_000), st.sampled_from([-1.5, -2.5, -3.0, -4.0]))
def test_rayleigh_identity(n, seed, alpha):
    rng = np.random.default_rng(seed)
    c = np.triu(rng.uniform(-2, 2, (n, n)), 1)
    spec = ProblemSpec(rng.uniform(0.5, 2, n), c + c.T, alpha)
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    w = force_map_w(spec, z)
    lhs = np.sum(spec.masses * (w * z.conj()).real)
    assert lhs == pytest.approx(total_potential(spec, z), rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("kind,alpha", [("power", -3.0), ("power", -1.5), ("logarithmic", -2.0)])
def test_gradient_matches_finite_differences(kind, alpha):
    rng = np.random.default_rng(3)
    spec = ProblemSpec(rng.uniform(0.5, 2, 4), 1 - np.eye(4), alpha, kind)
    z = rng.normal(size=4) + 1j * rng.normal(size=4)
    g = potential_gradient(spec, z)
    h = 1e-6
    for i in range(4):
        for step, comp in ((h, g[i].real), (1j * h, g[i].imag)):
            e = np.zeros(4, complex)
            e[i] = step
            fd = (total_potential(spec, z + e) - total_potential(spec, z - e)) / (2 * h)
            assert comp == pytest.approx(fd, rel=1e-6, abs=1e-8)


def test_hessian_matches_finite_differences():
    rng = np.random.default_rng(5)
    for spec in (ProblemSpec.equal_masses(4), ProblemSpec.newtonian([1, 2, 0.5], -2.5)):
        n = spec.n
        z = rng.normal(size=n) + 1j * rng.normal(size=n)
        H = reduced_potential_hessian(spec, z)
        v = np.ascontiguousarray(z).view(float)
        h = 1e-4
        E = np.eye(2 * n) * h

        def u(vv):
            return reduced_potential(spec, vv.view(complex))

        fd = np.array([[(u(v + E[i] + E[j]) - u(v + E[i] - E[j]) - u(v - E[i] + E[j]) + u(v - E[i] - E[j]))
                        / (4 * h * h) for j in range(2 * n)] for i in range(2 * n)])
        np.testing.assert_allclose(H, fd, rtol=1e-5, atol=1e-6 * np.abs(H).max())
