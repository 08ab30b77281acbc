"""Problem description and solution records shared by the whole package."""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

log = logging.getLogger(__name__)

# a ShapePoint is a complex ndarray of length n-2: the free affine chart coordinates
ShapePoint = np.ndarray


class SpecError(ValueError):
    """Raised when a problem description violates one of its invariants."""


class PotentialKind(str, enum.Enum):
    POWER = "power"
    LOGARITHMIC = "logarithmic"


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """Masses, interaction coefficients and the pair potential of an n-body problem.

    ``coeffs`` is the symmetric matrix of interaction coefficients m_ij with a
    zero diagonal.  For ``kind="logarithmic"`` the pair potential is log r and
    ``alpha`` is forced to -2, the exponent of the associated force kernel.
    """

    masses: np.ndarray
    coeffs: np.ndarray
    alpha: float = -3.0
    kind: PotentialKind = PotentialKind.POWER

    def __post_init__(self):
        kind = PotentialKind(self.kind)
        masses = np.array(self.masses, dtype=float).reshape(-1)
        n = masses.size
        coeffs = np.array(self.coeffs, dtype=float)
        if n < 2:
            raise SpecError("need at least two bodies")
        if coeffs.shape != (n, n):
            raise SpecError(f"coeffs must be {n}x{n}, got {coeffs.shape}")
        if not np.all(np.isfinite(masses)) or np.any(masses <= 0):
            raise SpecError("mass must be positive")
        if not np.all(np.isfinite(coeffs)):
            raise SpecError("coeffs must be finite")
        if not np.array_equal(coeffs, coeffs.T):
            raise SpecError("coeffs not symmetric")
        if np.any(np.diag(coeffs) != 0):
            raise SpecError("coeffs must have a zero diagonal")
        alpha = -2.0 if kind is PotentialKind.LOGARITHMIC else float(self.alpha)
        if not math.isfinite(alpha):
            raise SpecError("alpha must be finite")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "masses", _frozen(masses))
        object.__setattr__(self, "coeffs", _frozen(coeffs))

    # -- presets -----------------------------------------------------------
    @classmethod
    def newtonian(cls, masses: Sequence[float], alpha: float = -3.0) -> "ProblemSpec":
        m = np.asarray(masses, dtype=float)
        c = np.outer(m, m)
        np.fill_diagonal(c, 0.0)
        return cls(m, c, alpha, PotentialKind.POWER)

    @classmethod
    def equal_masses(cls, n: int, alpha: float = -3.0, kind: str = "power") -> "ProblemSpec":
        c = np.ones((n, n))
        np.fill_diagonal(c, 0.0)
        return cls(np.ones(n), c, alpha, PotentialKind(kind))

    @classmethod
    def logarithmic_equal(cls, n: int) -> "ProblemSpec":
        return cls.equal_masses(n, -2.0, "logarithmic")

    # -- derived properties ------------------------------------------------
    @property
    def n(self) -> int:
        return self.masses.size

    @property
    def is_log(self) -> bool:
        return self.kind is PotentialKind.LOGARITHMIC

    @cached_property
    def pair_coeffs(self) -> np.ndarray:
        """m_ij for i<j, in row-major pair order."""
        return _frozen(self.coeffs[np.triu_indices(self.n, 1)])

    @property
    def sign_definite(self) -> bool:
        """All m_ij nonzero and of one sign (hypothesis of the collinear count)."""
        c = self.pair_coeffs
        return bool(np.all(c > 0) or np.all(c < 0))

    @property
    def all_positive(self) -> bool:
        return bool(np.all(self.pair_coeffs > 0))

    @property
    def fully_symmetric(self) -> bool:
        """Equal masses and uniform coefficients: every relabeling is a symmetry."""
        c = self.pair_coeffs
        return bool(np.all(self.masses == self.masses[0]) and np.all(c == c[0]))

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "kind": self.kind.value,
            "alpha": self.alpha,
            "masses": self.masses.tolist(),
            "coeffs": self.coeffs.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ProblemSpec":
        """Build from the JSON problem-spec schema.

        ``coeffs`` may be a full matrix or a lower triangle (row i holding i or
        i+1 entries); the triangle is mirrored.  Missing ``coeffs`` means the
        Newtonian choice m_ij = m_i m_j.
        """
        try:
            masses = [float(m) for m in d["masses"]]
        except KeyError:
            if "n" not in d:
                raise SpecError("spec needs 'masses' or 'n'") from None
            masses = [1.0] * int(d["n"])
        n = len(masses)
        if "n" in d and int(d["n"]) != n:
            raise SpecError(f"n={d['n']} but {n} masses given")
        kind = d.get("kind", "power")
        try:
            kind = PotentialKind(kind)
        except ValueError:
            raise SpecError(f"unknown potential kind {kind!r}") from None
        alpha = float(d.get("alpha", -2.0 if kind is PotentialKind.LOGARITHMIC else -3.0))
        raw = d.get("coeffs")
        if raw is None:
            c = np.outer(masses, masses)
            np.fill_diagonal(c, 0.0)
        else:
            c = _read_coeffs(raw, n)
        return cls(np.array(masses), c, alpha, kind)


def _read_coeffs(raw, n: int) -> np.ndarray:
    rows = [list(map(float, r)) for r in raw]
    if len(rows) != n:
        raise SpecError(f"coeffs must have {n} rows")
    if all(len(r) == n for r in rows):
        return np.array(rows)
    c = np.zeros((n, n))
    for i, r in enumerate(rows):
        if len(r) not in (i, i + 1):
            raise SpecError(f"coeffs row {i} has {len(r)} entries; expected {n}, {i} or {i + 1}")
        c[i, :i] = r[:i]
    return c + c.T


def validate_spec(spec: ProblemSpec) -> ProblemSpec:
    """Check the solver-pipeline invariants; return it unchanged."""
    if spec.n < 3:
        raise SpecError("n must be at least 3")
    if np.any(spec.masses <= 0):
        raise SpecError("mass must be positive")
    if not np.array_equal(spec.coeffs, spec.coeffs.T):
        raise SpecError("coeffs not symmetric")
    if spec.alpha >= -1:
        log.warning("alpha=%g >= -1: central configurations need not stay away from collisions",
                    spec.alpha)
    if not spec.sign_definite:
        log.info("coefficients are not sign-definite; collinear count checks are skipped")
    return spec


def centroid_tolerance(z: np.ndarray) -> float:
    return 1e-12 * (1.0 + float(np.max(np.abs(z))))


@dataclass(frozen=True, eq=False)
class Configuration:
    """n labeled planar bodies (complex positions) with vanishing weighted centroid."""

    points: np.ndarray
    spec: ProblemSpec

    def __post_init__(self):
        z = np.array(self.points, dtype=complex).reshape(-1)
        if z.size != self.spec.n:
            raise SpecError(f"expected {self.spec.n} points, got {z.size}")
        c = np.dot(self.spec.masses, z) / self.spec.masses.sum()
        if abs(c) > centroid_tolerance(z):
            raise SpecError(f"weighted centroid {c:.3e} is not zero")
        if min_distance(z) <= 0:
            raise SpecError("configuration has a collision")
        object.__setattr__(self, "points", _frozen(z))

    @classmethod
    def centered(cls, points, spec: ProblemSpec) -> "Configuration":
        z = np.asarray(points, dtype=complex)
        return cls(z - np.dot(spec.masses, z) / spec.masses.sum(), spec)

    @property
    def n(self) -> int:
        return self.points.size


def min_distance(z: np.ndarray) -> float:
    d = np.abs(z[:, None] - z[None, :])
    iu = np.triu_indices(z.size, 1)
    return float(d[iu].min())


def _pairs(a: np.ndarray) -> list[list[float]]:
    a = np.asarray(a, dtype=complex)
    return [[float(v.real), float(v.imag)] for v in a]


def _unpairs(p) -> np.ndarray:
    return np.array([complex(re, im) for re, im in p], dtype=complex)


@dataclass(eq=False)
class SolutionRecord:
    """One central configuration class with every attribute of a table row."""

    configuration: Configuration
    lam: float
    reduced_potential: float
    morse_index: int
    fp_index: int
    isotropy_order: int
    chiral: bool
    collinear: bool
    invariant: np.ndarray
    morse_degenerate: bool = False
    fp_degenerate: bool = False
    hits: int = 1
    first_attempt: int = -1

    @property
    def multiplicity(self) -> int:
        """How many times the class counts in CC_1/SO(2) relative to CC_1/O(2)."""
        return 2 if self.chiral else 1

    def to_dict(self) -> dict[str, Any]:
        return {
            "points": _pairs(self.configuration.points),
            "lambda": self.lam,
            "reduced_potential": self.reduced_potential,
            "morse_index": self.morse_index,
            "fp_index": self.fp_index,
            "isotropy": self.isotropy_order,
            "chiral": self.chiral,
            "collinear": self.collinear,
            "invariant": _pairs(self.invariant),
            "morse_degenerate": self.morse_degenerate,
            "fp_degenerate": self.fp_degenerate,
            "hits": self.hits,
            "first_attempt": self.first_attempt,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any], spec: ProblemSpec) -> "SolutionRecord":
        return cls(
            configuration=Configuration(_unpairs(d["points"]), spec),
            lam=float(d["lambda"]),
            reduced_potential=float(d["reduced_potential"]),
            morse_index=int(d["morse_index"]),
            fp_index=int(d["fp_index"]),
            isotropy_order=int(d["isotropy"]),
            chiral=bool(d["chiral"]),
            collinear=bool(d["collinear"]),
            invariant=_unpairs(d.get("invariant", [])),
            morse_degenerate=bool(d.get("morse_degenerate", False)),
            fp_degenerate=bool(d.get("fp_degenerate", False)),
            hits=int(d.get("hits", 1)),
            first_attempt=int(d.get("first_attempt", -1)),
        )


def symmetry_group_order(spec: ProblemSpec) -> int:
    """Number of relabelings preserving the masses and the coefficient matrix."""
    n = spec.n
    if spec.fully_symmetric:
        return math.factorial(n)
    m, c = spec.masses, spec.coeffs
    count = 0
    perm = [-1] * n
    used = [False] * n

    def extend(i: int):
        nonlocal count
        if i == n:
            count += 1
            return
        for j in range(n):
            if used[j] or m[j] != m[i]:
                continue
            if any(c[perm[k], j] != c[k, i] for k in range(i)):
                continue
            perm[i], used[j] = j, True
            extend(i + 1)
            used[j] = False
        perm[i] = -1

    extend(0)
    return count


def labeled_weight(isotropy_order: int, chiral: bool, n: int, group_order: int) -> Fraction:
    """Share of n! labeled critical points in X carried by one table row."""
    return Fraction(group_order * (2 if chiral else 1), isotropy_order * math.factorial(n))


@dataclass(eq=False)
class SearchReport:
    spec: ProblemSpec
    solutions: list[SolutionRecord]
    attempts: int
    successes: int
    failures: dict[str, int] = field(default_factory=dict)
    rng_seed: int = 0
    checks: dict[str, Any] = field(default_factory=dict)

    @property
    def group_order(self) -> int:
        return symmetry_group_order(self.spec)

    @property
    def morse_counts(self) -> dict[int, int]:
        """nu_k: critical points of index k of the reduced potential on shape space."""
        g = self.group_order
        counts: dict[int, int] = {}
        for r in self.solutions:
            k = r.morse_index
            counts[k] = counts.get(k, 0) + g * r.multiplicity // r.isotropy_order
        return dict(sorted(counts.items()))

    @property
    def morse_sum(self) -> Fraction:
        g, n = self.group_order, self.spec.n
        return sum((Fraction((-1) ** r.morse_index) * labeled_weight(r.isotropy_order, r.chiral, n, g)
                    for r in self.solutions), Fraction(0))

    def to_dict(self) -> dict[str, Any]:
        return {
            "spec": self.spec.to_dict(),
            "rng_seed": self.rng_seed,
            "attempts": self.attempts,
            "successes": self.successes,
            "failures": dict(self.failures),
            "classes": [r.to_dict() for r in self.solutions],
            "checks": self.checks,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "SearchReport":
        spec = ProblemSpec.from_dict(d["spec"])
        return cls(
            spec=spec,
            solutions=[SolutionRecord.from_dict(c, spec) for c in d.get("classes", [])],
            attempts=int(d.get("attempts", 0)),
            successes=int(d.get("successes", 0)),
            failures={k: int(v) for k, v in d.get("failures", {}).items()},
            rng_seed=int(d.get("rng_seed", 0)),
            checks=d.get("checks", {}),
        )
