"""Normalization, equivalence and per-class attributes of central configurations."""
from __future__ import annotations

import logging
import math
from fractions import Fraction

import numpy as np

from .chart import DEGENERATE_DET, ResidualSystem
from .model import Configuration, ProblemSpec, SolutionRecord, symmetry_group_order
from .potential import (
    as_points,
    centrality_residual,
    inertia,
    lambda_estimate,
    reduced_potential,
    reduced_potential_hessian,
)

log = logging.getLogger(__name__)

TOL_MATCH = 1e-7
COEFF_FLOOR = 1e-9
MORSE_DEGENERATE = 1e-6


def _center_scale(spec: ProblemSpec, z: np.ndarray) -> np.ndarray:
    m = spec.masses
    z = z - np.dot(m, z) / m.sum()
    return z / math.sqrt(inertia(spec, z))


def _label_order(z: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Sort key (|z|, arg z in [0, 2pi)) with moduli equal within tol treated as ties."""
    r = np.abs(z)
    ang = np.mod(np.angle(z), 2 * np.pi)
    ang[(ang > 2 * np.pi - tol) | (r < tol)] = 0.0
    order = np.argsort(r, kind="stable")
    # merge near-equal moduli into one shell before sorting by angle
    shell = np.zeros(z.size, dtype=int)
    for a, b in zip(order[:-1], order[1:]):
        shell[b] = shell[a] + (r[b] - r[a] > tol)
    return np.lexsort((ang, shell))


def normalize_configuration(spec: ProblemSpec, z) -> Configuration:
    """Inertia 1, centroid 0, the outermost body on the positive real axis.

    When every relabeling is a symmetry of the problem the labels are then
    sorted by (|z|, arg z); otherwise labels keep their meaning.
    """
    z = _center_scale(spec, as_points(z).astype(complex))
    r = np.abs(z)
    top = np.flatnonzero(r >= r.max() * (1 - 1e-9))
    sortable = spec.fully_symmetric
    if sortable:
        # among ties take the one that comes first in label order
        rank = np.empty(z.size, dtype=int)
        rank[_label_order(z)] = np.arange(z.size)
        ref = top[np.argmin(rank[top])]
    else:
        ref = top[0]
    z = z * (abs(z[ref]) / z[ref])
    z[ref] = abs(z[ref])
    if sortable:
        z = z[_label_order(z)]
    z = z - np.dot(spec.masses, z) / spec.masses.sum()
    return Configuration(z, spec)


def monic_invariant(z) -> np.ndarray:
    """Coefficients (a_{n-2}, ..., a_0) of prod (t - z_i) for a zero-sum configuration."""
    z = as_points(z)
    c = np.poly(z)
    if abs(c[1]) > 1e-12 * (1 + np.abs(z).max()):
        raise ValueError("sum of positions is not zero (unequal masses?)")
    return c[2:].astype(complex)


def same_class(a, b_coeffs, tol: float = 1e-7) -> bool:
    """Whether two invariants differ by z -> bz (and possibly conjugation).

    Scaling by b multiplies a_i by b^(n-i).  b is solved from one nonzero
    pair and every relation is then checked to relative tolerance ``tol``.
    """
    a = np.asarray(a, dtype=complex)
    a2 = np.asarray(b_coeffs, dtype=complex)
    if a.shape != a2.shape:
        return False
    if a.size == 0:
        return True
    deg = np.arange(a.size) + 2
    big1, big2 = np.abs(a) > COEFF_FLOOR, np.abs(a2) > COEFF_FLOOR
    if not big1.any() and not big2.any():
        log.warning("comparing null invariants")
        return True
    if not (big1 & big2).any():
        return False
    for target in (a2, a2.conj()):
        if _scaled_match(a, target, deg, big1 & big2, tol):
            return True
    return False


def _scaled_match(a, target, deg, both, tol) -> bool:
    k = np.flatnonzero(both)[0]
    d = deg[k]
    ratio = target[k] / a[k]
    rho = abs(ratio) ** (1.0 / d)
    scale = max(np.abs(target).max(), COEFF_FLOOR)
    for j in range(d):
        b = rho * np.exp(1j * (np.angle(ratio) + 2 * np.pi * j) / d)
        if np.abs(b ** deg * a - target).max() <= tol * scale:
            return True
    return False


def _coeff_preserving(spec: ProblemSpec, perm: np.ndarray) -> bool:
    if spec.fully_symmetric:
        return True
    return bool(np.array_equal(spec.masses[perm], spec.masses)
                and np.array_equal(spec.coeffs[np.ix_(perm, perm)], spec.coeffs))


def alignments(spec: ProblemSpec, src, dst, reflect: bool = False, tol: float = TOL_MATCH,
               first_only: bool = False) -> list[np.ndarray]:
    """Relabelings sigma of the problem with dst[sigma(i)] = b * src_i for a unit complex b.

    With ``reflect`` the source is conjugated first.  Both inputs are
    normalized internally.  Candidates for b come from sending the outermost
    source body to every destination body of the same modulus, so the search
    is O(n^3) rather than over all n! permutations.
    """
    s = _center_scale(spec, as_points(src).astype(complex))
    d = _center_scale(spec, as_points(dst).astype(complex))
    if reflect:
        s = s.conj()
    rs, rd = np.abs(s), np.abs(d)
    ref = int(np.argmax(rs))
    found = []
    for t in np.flatnonzero(np.abs(rd - rs[ref]) <= tol):
        if spec.masses[t] != spec.masses[ref]:
            continue
        b = d[t] / s[ref]
        img = b * s
        dist = np.abs(img[:, None] - d[None, :])
        perm = np.argmin(dist, axis=1)
        if dist[np.arange(s.size), perm].max() > tol:
            continue
        if np.unique(perm).size != perm.size or not _coeff_preserving(spec, perm):
            continue
        found.append(perm)
        if first_only:
            break
    return found


def isotropy_order(spec: ProblemSpec, z) -> tuple[int, bool]:
    """(number of rotation/scaling symmetries among relabelings, chirality flag)."""
    order = len(alignments(spec, z, z))
    chiral = not alignments(spec, z, z, reflect=True, first_only=True)
    return order, chiral


def labeled_class_count(spec: ProblemSpec, z) -> Fraction:
    """Labeled configurations mod O(2) and scaling in the class of z.

    Equals |G| divided by the number of relabelings in G that map z onto a
    rotated or a reflected copy of itself (G: mass- and coefficient-preserving
    relabelings).
    """
    direct = {tuple(p) for p in alignments(spec, z, z)}
    mirror = {tuple(p) for p in alignments(spec, z, z, reflect=True)}
    return Fraction(symmetry_group_order(spec), len(direct | mirror))


def collinearity_test(z, tol: float = 1e-9) -> bool:
    z = as_points(z)
    r = np.abs(z)
    ref = z[np.argmax(r)]
    rot = z * (abs(ref) / ref)
    return bool(np.abs(rot.imag).max() <= tol * r.max())


def equivalent(spec: ProblemSpec, z1, z2, tol_dedup: float = 1e-7) -> bool:
    """Same class up to relabeling, rotation, scaling and reflection."""
    if spec.fully_symmetric:
        return same_class(monic_invariant(_center_scale(spec, as_points(z1))),
                          monic_invariant(_center_scale(spec, as_points(z2))), tol_dedup)
    return bool(alignments(spec, z1, z2, first_only=True)
                or alignments(spec, z1, z2, reflect=True, first_only=True))


def morse_index(spec: ProblemSpec, x, chart: ResidualSystem | None = None) -> tuple[int, bool]:
    """Negative-eigenvalue count of the reduced potential's Hessian in chart coordinates.

    Returns (index, degenerate) where degenerate means some eigenvalue is
    below 1e-6 of the spectral radius.
    """
    chart = chart or ResidualSystem(spec)
    z = chart.embed(np.asarray(x, dtype=complex))
    ev = np.linalg.eigvalsh(reduced_potential_hessian(spec, z, chart.basis))
    degenerate = bool(np.abs(ev).min() < MORSE_DEGENERATE * np.abs(ev).max())
    if degenerate:
        log.warning("degenerate critical point: eigenvalues %s", ev)
    return int(np.sum(ev < 0)), degenerate


def morse_index_fd(spec: ProblemSpec, x, chart: ResidualSystem | None = None, h: float | None = None):
    """Finite-difference Hessian of the reduced potential in chart coordinates."""
    chart = chart or ResidualSystem(spec)
    v = np.ascontiguousarray(np.asarray(x, dtype=complex)).view(float)
    h = h or 1e-5 * (1 + np.abs(v).max())
    dim = v.size

    def u(vv):
        return reduced_potential(spec, chart.embed(vv.view(complex)))

    H = np.empty((dim, dim))
    E = np.eye(dim) * h
    for i in range(dim):
        for j in range(i, dim):
            H[i, j] = H[j, i] = (u(v + E[i] + E[j]) - u(v + E[i] - E[j])
                                 - u(v - E[i] + E[j]) + u(v - E[i] - E[j])) / (4 * h * h)
    return H


def build_record(spec: ProblemSpec, x, chart: ResidualSystem | None = None,
                 first_attempt: int = -1) -> SolutionRecord:
    """Every table attribute of the central configuration at chart point x."""
    chart = chart or ResidualSystem(spec)
    x = np.asarray(x, dtype=complex)
    z = chart.embed(x)
    conf = normalize_configuration(spec, z)
    zn = conf.points
    k, mdeg = morse_index(spec, x, chart)
    fp, det = chart.fixed_point_index(x)
    fdeg = abs(det) < DEGENERATE_DET
    if fdeg:
        log.warning("degenerate fixed point: det(Id - Dg) = %.3e", det)
    order, chiral = isotropy_order(spec, zn)
    inv = monic_invariant(zn) if np.all(spec.masses == spec.masses[0]) else np.zeros(0, complex)
    return SolutionRecord(
        configuration=conf,
        lam=lambda_estimate(spec, zn),
        reduced_potential=reduced_potential(spec, zn),
        morse_index=k,
        fp_index=fp,
        isotropy_order=order,
        chiral=chiral,
        collinear=collinearity_test(zn),
        invariant=inv,
        morse_degenerate=mdeg,
        fp_degenerate=fdeg,
        first_attempt=first_attempt,
    )


class ClassRegistry:
    """Deduplicated list of classes; feed converged chart points in a fixed order."""

    def __init__(self, spec: ProblemSpec, tol_dedup: float = 1e-7):
        self.spec = spec
        self.tol_dedup = tol_dedup
        self._records: list[SolutionRecord] = []
        self._keys: list[np.ndarray] = []  # cached invariants (fully symmetric case)

    def __len__(self):
        return len(self._records)

    def _key(self, zn):
        return monic_invariant(zn) if self.spec.fully_symmetric else None

    def find(self, z, u: float | None = None, key=None) -> SolutionRecord | None:
        zn = _center_scale(self.spec, as_points(z))
        if u is None:
            u = reduced_potential(self.spec, zn)
        for rec, rkey in zip(self._records, self._keys):
            if abs(u - rec.reduced_potential) > 1e-8 * max(1.0, abs(u)):
                continue
            if rkey is not None:
                if key is None:
                    key = self._key(zn)
                if same_class(key, rkey, self.tol_dedup):
                    return rec
            elif equivalent(self.spec, zn, rec.configuration.points, self.tol_dedup):
                return rec
        return None

    def add(self, x, attempt: int, chart: ResidualSystem | None = None,
            tol_verify: float = 1e-10, verified: bool = False, u: float | None = None) -> bool:
        """Register a converged point; False if it fails the independent centrality check.

        Callers that already ran the centrality check (and computed the reduced
        potential) in bulk pass ``verified=True`` and ``u``.
        """
        chart = chart or ResidualSystem(self.spec)
        z = chart.embed(np.asarray(x, dtype=complex))
        if not verified and not centrality_residual(self.spec, z) < tol_verify:
            return False
        rec = self.find(z, u)
        if rec is not None:
            rec.hits += 1
            return True
        rec = build_record(self.spec, x, chart, first_attempt=attempt)
        self._records.append(rec)
        self._keys.append(self._key(rec.configuration.points))
        return True

    def records(self) -> list[SolutionRecord]:
        return sorted(self._records, key=lambda r: (r.reduced_potential, r.first_attempt))
