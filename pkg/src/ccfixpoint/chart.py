"""Affine chart of shape space and the fixed-point equations in it.

The default chart pins body n-1 at 1 and solves the weighted centroid for
body n; the remaining n-2 bodies are the free complex coordinates x.  Other
pinned/eliminated pairs are supported (the collinear solver needs them).

Real vectors interleave (Re, Im) of consecutive complex coordinates, which is
exactly ``x.view(float)`` for a contiguous complex array.
"""
from __future__ import annotations

import numpy as np

from .model import ProblemSpec
from .potential import (
    COLLISION_RATIO,
    CollisionError,
    _w_unchecked,
    force_jacobian,
    ksum,
    separation_ratio,
)

DEGENERATE_DET = 1e-8


class DegenerateFixedPoint(ArithmeticError):
    pass


def to_real(x: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(x, dtype=complex).view(float)


def to_complex(v: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(v, dtype=float).view(complex)


def cmul_matrix(c: np.ndarray) -> np.ndarray:
    """Real 2x2 matrices of multiplication by complex c, shape (..., 2, 2)."""
    c = np.asarray(c, dtype=complex)
    out = np.empty(c.shape + (2, 2))
    out[..., 0, 0] = c.real
    out[..., 0, 1] = -c.imag
    out[..., 1, 0] = c.imag
    out[..., 1, 1] = c.real
    return out


def _flatten_blocks(b: np.ndarray) -> np.ndarray:
    """(..., k, l, 2, 2) blocks -> (..., 2k, 2l) matrix."""
    sh = b.shape
    b = np.swapaxes(b, -3, -2)
    return b.reshape(sh[:-4] + (2 * sh[-4], 2 * sh[-3]))


class ResidualSystem:
    """Fixed-point equations w_p x_k = w_k of the shape-space self-map in one chart."""

    def __init__(self, spec: ProblemSpec, pinned: int | None = None, eliminated: int | None = None):
        n = spec.n
        p = n - 2 if pinned is None else pinned
        q = n - 1 if eliminated is None else eliminated
        if p == q or not (0 <= p < n and 0 <= q < n):
            raise ValueError(f"bad chart (pinned={p}, eliminated={q}) for n={n}")
        self.spec = spec
        self.pinned, self.eliminated = p, q
        self.free = np.array([k for k in range(n) if k not in (p, q)], dtype=int)
        m = spec.masses
        E = np.zeros((n, n - 2))
        E[self.free, np.arange(n - 2)] = 1.0
        E[q, :] = -m[self.free] / m[q]
        self.basis = E
        self.dim = 2 * (n - 2)

    def __repr__(self):
        return f"ResidualSystem(n={self.spec.n}, pinned={self.pinned}, eliminated={self.eliminated})"

    # -- embedding ---------------------------------------------------------
    def embed(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        m = self.spec.masses
        z = np.empty(x.shape[:-1] + (self.spec.n,), dtype=complex)
        z[..., self.free] = x
        z[..., self.pinned] = 1.0
        z[..., self.eliminated] = -(ksum(m[self.free] * x) + m[self.pinned]) / m[self.eliminated]
        return z

    def shape_point(self, z) -> np.ndarray:
        """Chart coordinates of a configuration (inverse of :meth:`embed`)."""
        z = np.asarray(z, dtype=complex)
        m = self.spec.masses
        z = z - (z @ m / m.sum())[..., None]
        zp = z[..., self.pinned]
        if np.any(zp == 0):
            raise ValueError("configuration lies outside this chart (pinned body at the centroid)")
        return z[..., self.free] / zp[..., None]

    # -- residual and derivatives -------------------------------------------
    def evaluate(self, x):
        """Residual and a collision-free mask, without raising (batched)."""
        z = self.embed(x)
        ok = separation_ratio(z) >= COLLISION_RATIO
        with np.errstate(all="ignore"):
            w = _w_unchecked(self.spec, z)
        F = w[..., self.pinned, None] * x - w[..., self.free]
        return F, ok

    def residual(self, x) -> np.ndarray:
        F, ok = self.evaluate(x)
        if not np.all(ok):
            raise CollisionError("collision in embedded configuration")
        return F

    def _dw_dx(self, z):
        return np.einsum("...ijab,jl->...ilab", force_jacobian(self.spec, z), self.basis)

    def jacobian(self, x) -> np.ndarray:
        """Analytic real Jacobian of the residual, shape (..., 2(n-2), 2(n-2))."""
        x = np.asarray(x, dtype=complex)
        z = self.embed(x)
        if np.any(separation_ratio(z) < COLLISION_RATIO):
            raise CollisionError("collision in embedded configuration")
        w = _w_unchecked(self.spec, z)
        D = self._dw_dx(z)
        Dp = D[..., self.pinned, :, :, :]
        J = np.einsum("...kab,...lbc->...klac", cmul_matrix(x), Dp) - D[..., self.free, :, :, :]
        k = np.arange(self.spec.n - 2)
        J[..., k, k, :, :] += cmul_matrix(w[..., self.pinned])[..., None, :, :]
        return _flatten_blocks(J)

    def self_map(self, x) -> np.ndarray:
        """x -> (w_k / w_p)_k, the self-map of shape space in this chart."""
        z = self.embed(x)
        if np.any(separation_ratio(z) < COLLISION_RATIO):
            raise CollisionError("collision in embedded configuration")
        w = _w_unchecked(self.spec, z)
        wp = w[..., self.pinned]
        if np.any(wp == 0):
            raise ZeroDivisionError("image leaves the chart (w_p = 0)")
        return w[..., self.free] / wp[..., None]

    def self_map_jacobian(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        z = self.embed(x)
        if np.any(separation_ratio(z) < COLLISION_RATIO):
            raise CollisionError("collision in embedded configuration")
        w = _w_unchecked(self.spec, z)
        wp = w[..., self.pinned]
        if np.any(wp == 0):
            raise ZeroDivisionError("image leaves the chart (w_p = 0)")
        g = w[..., self.free] / wp[..., None]
        D = self._dw_dx(z)
        inner = D[..., self.free, :, :, :] - np.einsum(
            "...kab,...lbc->...klac", cmul_matrix(g), D[..., self.pinned, :, :, :])
        Dg = np.einsum("...ab,...klbc->...klac", cmul_matrix(1.0 / wp), inner)
        return _flatten_blocks(Dg)

    # real-vector conveniences used by the solver
    def residual_real(self, v: np.ndarray):
        F, ok = self.evaluate(to_complex(v))
        return to_real(F), ok

    def jacobian_real(self, v: np.ndarray) -> np.ndarray:
        return self.jacobian(to_complex(v))

    def fixed_point_index(self, x, tol_residual: float = 1e-8) -> tuple[int, float]:
        """(sign det(Id - Dg), det(Id - Dg)) at a fixed point x."""
        x = np.asarray(x, dtype=complex)
        F = self.residual(x)
        wp = _w_unchecked(self.spec, self.embed(x))[self.pinned]
        scale = abs(wp) * max(1.0, float(np.abs(x).max(initial=0.0)))
        if np.max(np.abs(F)) > tol_residual * scale:
            raise ValueError(f"not a fixed point: residual {np.max(np.abs(F)):.2e}")
        Dg = self.self_map_jacobian(x)
        det = float(np.linalg.det(np.eye(self.dim) - Dg))
        return (1 if det > 0 else -1), det


def default_chart(spec: ProblemSpec) -> ResidualSystem:
    return ResidualSystem(spec)


def embed_affine(spec: ProblemSpec, x) -> np.ndarray:
    """Configuration (x_1, ..., x_{n-2}, 1, z_n) with vanishing weighted centroid."""
    z = ResidualSystem(spec).embed(x)
    if np.any(separation_ratio(z) < COLLISION_RATIO):
        raise CollisionError("collision in embedded configuration")
    return z


def residual_system(spec: ProblemSpec, x) -> np.ndarray:
    """Real/imaginary parts of F_i = w_{n-1} x_i - w_i, interleaved."""
    return to_real(ResidualSystem(spec).residual(np.asarray(x, dtype=complex)))


def residual_jacobian(spec: ProblemSpec, x) -> np.ndarray:
    return ResidualSystem(spec).jacobian(x)


def self_map_g(spec: ProblemSpec, x) -> np.ndarray:
    return ResidualSystem(spec).self_map(x)


def fixed_point_index(spec: ProblemSpec, x, chart: ResidualSystem | None = None) -> int:
    chart = chart or ResidualSystem(spec)
    idx, det = chart.fixed_point_index(x)
    if abs(det) < DEGENERATE_DET:
        raise DegenerateFixedPoint(f"degenerate fixed point: det(Id - Dg) = {det:.3e}")
    return idx
