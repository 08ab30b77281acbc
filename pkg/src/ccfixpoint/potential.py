"""Potential, inertia, the force-like map w and the reduced potential.

Configurations are complex arrays of shape ``(..., n)``; most functions also
accept a :class:`~ccfixpoint.model.Configuration`.  Batched kernels (leading
axes) are what the solver uses; the scalar functions are thin wrappers.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .model import Configuration, ProblemSpec

COLLISION_RATIO = 1e-12


class CollisionError(ValueError):
    """Two bodies coincide (relative to the configuration diameter)."""


def as_points(z) -> np.ndarray:
    if isinstance(z, Configuration):
        return z.points
    return np.asarray(z, dtype=complex)


@lru_cache(maxsize=None)
def pair_index(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n, 1)


def separation_ratio(z: np.ndarray) -> np.ndarray:
    """Minimum pairwise distance over the diameter, per configuration."""
    i, j = pair_index(z.shape[-1])
    pd = np.abs(z[..., i] - z[..., j])
    diam = pd.max(axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(diam > 0, pd.min(axis=-1) / diam, 0.0)


def _check_collision(z: np.ndarray):
    if np.any(separation_ratio(z) < COLLISION_RATIO):
        raise CollisionError("collision in configuration")


def ksum(terms: np.ndarray, axis: int = -1) -> np.ndarray:
    """Compensated (TwoSum) summation along one axis; works for complex too."""
    t = np.moveaxis(terms, axis, 0)
    s = t[0].copy()
    c = np.zeros_like(s)
    for x in t[1:]:
        u = s + x
        bp = u - s
        c += (s - (u - bp)) + (x - bp)
        s = u
    return s + c


def pair_phi(spec: ProblemSpec, r):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise CollisionError("pair distance must be positive")
    out = np.log(r) if spec.is_log else r ** (spec.alpha + 2.0)
    return float(out) if out.ndim == 0 else out


def total_potential(spec: ProblemSpec, z) -> float:
    z = as_points(z)
    _check_collision(z)
    i, j = pair_index(spec.n)
    r = np.abs(z[i] - z[j])
    return math.fsum(spec.pair_coeffs * pair_phi(spec, r))


def inertia(spec: ProblemSpec, z):
    z = as_points(z)
    out = ksum(spec.masses * (z.real ** 2 + z.imag ** 2))
    return float(out) if np.ndim(out) == 0 else out


def _kernel(spec: ProblemSpec, z: np.ndarray):
    """Pair differences d_ij, distances r_ij (diagonal set to 1) and m_ij r^alpha."""
    d = z[..., :, None] - z[..., None, :]
    r = np.abs(d)
    n = spec.n
    r[..., np.arange(n), np.arange(n)] = 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        g = spec.coeffs * r ** spec.alpha
    return d, r, g


def force_map_w(spec: ProblemSpec, z) -> np.ndarray:
    """w_i = sum_j m_i^-1 m_ij |z_i - z_j|^alpha (z_i - z_j), batched over leading axes."""
    z = as_points(z)
    _check_collision(z)
    return _w_unchecked(spec, z)


def _w_unchecked(spec: ProblemSpec, z: np.ndarray) -> np.ndarray:
    d, _, g = _kernel(spec, z)
    return ksum(g * d) / spec.masses


def force_jacobian(spec: ProblemSpec, z) -> np.ndarray:
    """Real derivative of w with respect to z, as 2x2 blocks of shape (..., n, n, 2, 2).

    Block (i, j) is dw_i/dz_j with z_j identified with (Re, Im).  Each pair
    contributes the derivative of d -> |d|^alpha d, which is
    |d|^alpha (Id + alpha * dhat dhat^T).
    """
    z = as_points(z)
    d, r, g = _kernel(spec, z)
    a = spec.alpha
    u = np.stack([d.real, d.imag], axis=-1) / r[..., None]
    eye = np.eye(2)
    blocks = g[..., None, None] * (eye + a * u[..., :, None] * u[..., None, :])
    blocks = blocks / spec.masses[:, None, None, None]
    n = spec.n
    jac = -blocks
    diag = blocks.sum(axis=-3)
    jac[..., np.arange(n), np.arange(n), :, :] = diag
    return jac


def lambda_estimate(spec: ProblemSpec, z):
    """Rayleigh quotient Re(sum m_i w_i conj z_i) / I."""
    z = as_points(z)
    w = force_map_w(spec, z)
    num = ksum(spec.masses * (w * z.conj()).real)
    out = num / inertia(spec, z)
    return float(out) if np.ndim(out) == 0 else out


def reduced_potential(spec: ProblemSpec, z) -> float:
    """U I^(-1-alpha/2), or exp(U) I^(-S/2) with S = sum_{i<j} m_ij for the log kind."""
    z = as_points(z)
    U = total_potential(spec, z)
    I = inertia(spec, z)
    if spec.is_log:
        return math.exp(U - 0.5 * math.fsum(spec.pair_coeffs) * math.log(I))
    return U * I ** (-1.0 - spec.alpha / 2.0)


def reduced_potential_batch(spec: ProblemSpec, z: np.ndarray) -> np.ndarray:
    """Reduced potential over leading batch axes (no collision check)."""
    i, j = pair_index(spec.n)
    r = np.abs(z[..., i] - z[..., j])
    c = spec.pair_coeffs
    I = inertia(spec, z)
    with np.errstate(all="ignore"):
        if spec.is_log:
            U = ksum(c * np.log(r))
            return np.exp(U - 0.5 * c.sum() * np.log(I))
        return ksum(c * r ** (spec.alpha + 2.0)) * I ** (-1.0 - spec.alpha / 2.0)


def centrality_residual_batch(spec: ProblemSpec, z: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        w = _w_unchecked(spec, z)
        lam = ksum(spec.masses * (w * z.conj()).real) / inertia(spec, z)
        return np.linalg.norm(w - lam[..., None] * z, axis=-1) / np.linalg.norm(w, axis=-1)


def centrality_residual(spec: ProblemSpec, z) -> float:
    """||w - lambda z|| / ||w||; zero exactly at central configurations."""
    z = as_points(z)
    w = force_map_w(spec, z)
    lam = lambda_estimate(spec, z)
    nw = np.linalg.norm(w)
    if nw == 0:
        return math.inf
    return float(np.linalg.norm(w - lam * z) / nw)


def potential_gradient(spec: ProblemSpec, z) -> np.ndarray:
    """Real gradient of U with respect to each z_i, as a complex vector.

    Equals (alpha+2) m_i w_i for the power kind and m_i w_i for the log kind.
    """
    z = as_points(z)
    w = force_map_w(spec, z)
    factor = 1.0 if spec.is_log else spec.alpha + 2.0
    return factor * spec.masses * w


def reduced_potential_hessian(spec: ProblemSpec, z, basis: np.ndarray | None = None) -> np.ndarray:
    """Hessian of the reduced potential (log of it for the log kind) in real coordinates.

    ``basis`` is an optional real n x k matrix E; coordinates then are x with
    z = E x + const, and the returned Hessian is k-dimensional complex, i.e.
    a real 2k x 2k matrix with interleaved (Re, Im) ordering.  For the log kind
    the Hessian of U - S/2 log I is returned; its signature at critical points
    equals that of exp(U) I^(-S/2).
    """
    z = as_points(z)
    _check_collision(z)
    n = spec.n
    m2 = np.repeat(spec.masses, 2)
    factor = 1.0 if spec.is_log else spec.alpha + 2.0
    blocks = force_jacobian(spec, z)
    HU = factor * (spec.masses[:, None, None, None] * blocks).transpose(0, 2, 1, 3).reshape(2 * n, 2 * n)
    gU = np.ascontiguousarray(potential_gradient(spec, z)).view(float)
    zr = np.ascontiguousarray(z).view(float)
    I = inertia(spec, z)
    gI = 2.0 * m2 * zr
    HI = np.diag(2.0 * m2)
    if spec.is_log:
        S = math.fsum(spec.pair_coeffs)
        H = HU - 0.5 * S * (HI / I - np.outer(gI, gI) / I ** 2)
    else:
        U = total_potential(spec, z)
        p = -1.0 - spec.alpha / 2.0
        H = (I ** p * HU
             + p * I ** (p - 1) * (np.outer(gU, gI) + np.outer(gI, gU))
             + p * (p - 1) * U * I ** (p - 2) * np.outer(gI, gI)
             + p * U * I ** (p - 1) * HI)
    H = 0.5 * (H + H.T)
    if basis is None:
        return H
    A = np.kron(np.asarray(basis, dtype=float), np.eye(2))
    return A.T @ H @ A
