"""Damped Newton root finding for the chart equations, random multistart search
and per-ordering collinear solves."""
from __future__ import annotations

import enum
import itertools
import logging
import math
import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .chart import ResidualSystem, to_complex, to_real
from .model import ProblemSpec, SearchReport
from .potential import centrality_residual_batch, reduced_potential_batch, separation_ratio

log = logging.getLogger(__name__)


class Status(str, enum.Enum):
    CONVERGED = "converged"
    COLLISION_ABORT = "collision_abort"
    MAX_ITER = "max_iter"
    SINGULAR_JACOBIAN = "singular_jacobian"
    # iterate left every bounded region of the chart; the limit lies on the
    # hyperplane where the pinned body sits at the centroid
    CHART_ESCAPE = "chart_escape"


_RUNNING = -1
_STATUSES = list(Status)


@dataclass(frozen=True)
class SolveOptions:
    tol_root: float = 1e-13
    max_iter: int = 200
    armijo: float = 1e-4
    backtrack: float = 0.5
    max_backtracks: int = 40
    collision_guard: float = 1e-6
    max_chart_norm: float = 1e6


@dataclass
class SolveOutcome:
    status: Status
    x: np.ndarray | None
    iterations: int
    final_residual_norm: float

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED


def damped_newton(
    fun: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]],
    jac: Callable[[np.ndarray], np.ndarray],
    guard: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    opts: SolveOptions = SolveOptions(),
):
    """Batched Newton iteration with Armijo backtracking on ||F||^2.

    ``fun(x)`` returns residuals and a validity mask for a batch of real
    points, ``guard(x)`` a separation measure (abort below
    ``opts.collision_guard``).  Rows are independent: the result of one row
    does not depend on the rest of the batch.

    Returns (status codes, x, iterations, sup-norm of the final residual).
    """
    x = np.array(x0, dtype=float, copy=True)
    B = x.shape[0]
    status = np.full(B, _RUNNING)
    iters = np.zeros(B, dtype=int)
    F, ok = fun(x)
    F = np.where(ok[:, None], F, np.nan)
    status[~ok | (guard(x) < opts.collision_guard)] = _STATUSES.index(Status.COLLISION_ABORT)
    norm = np.abs(F).max(axis=1)

    for _ in range(opts.max_iter):
        run = status == _RUNNING
        done = run & (norm < opts.tol_root)
        status[done] = _STATUSES.index(Status.CONVERGED)
        idx = np.flatnonzero(run & ~done)
        if idx.size == 0:
            break
        J = jac(x[idx])
        try:
            dx = np.linalg.solve(J, -F[idx][..., None])[..., 0]
        except np.linalg.LinAlgError:
            dx = np.full((idx.size, x.shape[1]), np.nan)
            for r in range(idx.size):
                try:
                    dx[r] = np.linalg.solve(J[r], -F[idx[r]])
                except np.linalg.LinAlgError:
                    pass
        bad = ~np.all(np.isfinite(dx), axis=1)
        status[idx[bad]] = _STATUSES.index(Status.SINGULAR_JACOBIAN)
        idx, dx = idx[~bad], dx[~bad]
        iters[idx] += 1

        phi0 = 0.5 * np.sum(F[idx] ** 2, axis=1)
        t = np.ones(idx.size)
        pending = np.arange(idx.size)
        for _ in range(opts.max_backtracks):
            xt = x[idx[pending]] + t[pending, None] * dx[pending]
            Ft, okt = fun(xt)
            with np.errstate(invalid="ignore"):
                phit = 0.5 * np.sum(Ft ** 2, axis=1)
                accept = okt & (phit <= (1.0 - 2.0 * opts.armijo * t[pending]) * phi0[pending])
            rows = idx[pending[accept]]
            x[rows] = xt[accept]
            F[rows] = Ft[accept]
            pending = pending[~accept]
            if pending.size == 0:
                break
            t[pending] *= opts.backtrack
        # no acceptable step: no further progress is possible from here
        status[idx[pending]] = _STATUSES.index(Status.MAX_ITER)
        moved = np.setdiff1d(idx, idx[pending], assume_unique=True)
        norm[moved] = np.abs(F[moved]).max(axis=1)
        hit = moved[guard(x[moved]) < opts.collision_guard]
        status[hit] = _STATUSES.index(Status.COLLISION_ABORT)
        far = moved[np.abs(x[moved]).max(axis=1) > opts.max_chart_norm]
        status[far] = _STATUSES.index(Status.CHART_ESCAPE)

    run = status == _RUNNING
    status[run & (norm < opts.tol_root)] = _STATUSES.index(Status.CONVERGED)
    status[status == _RUNNING] = _STATUSES.index(Status.MAX_ITER)
    return status, x, iters, norm


def _planar_problem(chart: ResidualSystem):
    def guard(v):
        return separation_ratio(chart.embed(to_complex(v)))
    return chart.residual_real, chart.jacobian_real, guard


def _outcomes(status, x, iters, norm, to_shape) -> list[SolveOutcome]:
    out = []
    for s, xi, it, nr in zip(status, x, iters, norm):
        st = _STATUSES[s]
        out.append(SolveOutcome(st, to_shape(xi) if st is Status.CONVERGED else None, int(it), float(nr)))
    return out


def solve_batch(spec: ProblemSpec, x0, opts: SolveOptions = SolveOptions(),
                chart: ResidualSystem | None = None):
    """Newton solves from a batch of complex starts, shape (B, n-2)."""
    chart = chart or ResidualSystem(spec)
    fun, jac, guard = _planar_problem(chart)
    v0 = to_real(np.atleast_2d(np.asarray(x0, dtype=complex)))
    return damped_newton(fun, jac, guard, v0, opts)


def solve_from_start(spec: ProblemSpec, x0, opts: SolveOptions = SolveOptions(),
                     chart: ResidualSystem | None = None) -> SolveOutcome:
    res = solve_batch(spec, np.asarray(x0, dtype=complex)[None, :], opts, chart)
    return _outcomes(*res, to_shape=to_complex)[0]


# -- random multistart ------------------------------------------------------

def random_starts(seed: int, first: int, count: int, dim: int) -> np.ndarray:
    """Uniform starts in [-1, 1]^dim, one Philox stream per attempt index.

    Attempt ``a`` uses key ``seed`` and counter ``a * 2**64``, so every start
    depends only on (seed, a).
    """
    out = np.empty((count, dim))
    for r in range(count):
        bg = np.random.Philox(key=seed, counter=(first + r) << 64)
        out[r] = np.random.Generator(bg).uniform(-1.0, 1.0, dim)
    return out


@dataclass
class SearchOptions:
    solve: SolveOptions = field(default_factory=SolveOptions)
    chunk_size: int = 256
    tol_dedup: float = 1e-7
    tol_verify: float = 1e-10


def default_threads() -> int:
    return int(os.environ.get("CCFIX_THREADS", "1"))


def random_search(spec: ProblemSpec, attempts: int, seed: int = 0, threads: int | None = None,
                  opts: SearchOptions | None = None, registry=None) -> SearchReport:
    """Multistart search for central configurations; deterministic in (spec, attempts, seed).

    Attempts are processed in fixed-size chunks; chunks may run on several
    threads, but converged points are merged into the class registry in
    attempt order, so the report does not depend on the thread count.
    """
    from .classify import ClassRegistry

    if attempts < 1:
        raise ValueError("attempts must be >= 1")
    opts = opts or SearchOptions()
    threads = threads or default_threads()
    chart = ResidualSystem(spec)
    dim = chart.dim
    fun, jac, guard = _planar_problem(chart)
    registry = registry or ClassRegistry(spec, tol_dedup=opts.tol_dedup)

    chunks = [(a, min(opts.chunk_size, attempts - a)) for a in range(0, attempts, opts.chunk_size)]

    def work(chunk):
        first, count = chunk
        v0 = random_starts(seed, first, count, dim)
        status, x, iters, norm = damped_newton(fun, jac, guard, v0, opts.solve)
        # independent centrality check and reduced potential, vectorized per chunk
        z = chart.embed(to_complex(x))
        resid = centrality_residual_batch(spec, z)
        u = reduced_potential_batch(spec, z)
        return first, status, x, resid < opts.tol_verify, u

    failures: dict[str, int] = {}
    successes = 0
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = pool.map(work, chunks)
            successes = _merge(results, registry, chart, failures, opts)
    else:
        successes = _merge(map(work, chunks), registry, chart, failures, opts)

    report = SearchReport(spec=spec, solutions=registry.records(), attempts=attempts,
                          successes=successes, failures=failures, rng_seed=seed)
    return report


def _merge(results, registry, chart, failures, opts) -> int:
    successes = 0
    for first, status, x, verified, u in results:
        for r in range(status.size):
            st = _STATUSES[status[r]]
            if st is not Status.CONVERGED:
                failures[st.value] = failures.get(st.value, 0) + 1
            elif not verified[r]:
                failures["unverified"] = failures.get("unverified", 0) + 1
            else:
                registry.add(to_complex(x[r]), first + r, chart, verified=True, u=float(u[r]))
                successes += 1
    return successes


# -- collinear solutions ------------------------------------------------------

def orderings(n: int):
    """Orderings of n bodies on a line modulo reversal (first index < last index)."""
    for p in itertools.permutations(range(n)):
        if p[0] < p[-1]:
            yield p


@dataclass
class ComponentResult:
    ordering: tuple[int, ...]
    chart: ResidualSystem
    roots: list[np.ndarray]
    fp_indices: list[int]
    eigenvalues: list[np.ndarray]
    outcomes: list[SolveOutcome]

    @property
    def root_count(self) -> int:
        return len(self.roots)


def _collinear_problem(chart: ResidualSystem, ordering):
    n = chart.spec.n
    pos = np.empty(n, dtype=int)
    pos[list(ordering)] = np.arange(n)
    order = np.array(ordering)

    def embed(v):
        xc = np.zeros(v.shape[:-1] + (n - 2,), dtype=complex)
        xc.real = v
        return chart.embed(xc)

    def fun(v):
        xc = np.zeros(v.shape[:-1] + (n - 2,), dtype=complex)
        xc.real = v
        F, ok = chart.evaluate(xc)
        z = chart.embed(xc).real[..., order]
        ok &= np.all(np.diff(z, axis=-1) > 0, axis=-1)
        return F.real, ok

    def jac(v):
        xc = np.zeros(v.shape[:-1] + (n - 2,), dtype=complex)
        xc.real = v
        return chart.jacobian(xc)[..., 0::2, 0::2]

    def guard(v):
        z = embed(v).real[..., order]
        gaps = np.diff(z, axis=-1)
        return np.where(gaps.min(axis=-1) > 0, gaps.min(axis=-1) / (z[..., -1] - z[..., 0]), 0.0)

    return fun, jac, guard


def _collinear_starts(spec: ProblemSpec, chart: ResidualSystem, ordering, count: int, key: int):
    """Ordered starts on the line: equal gaps, then pseudo-random gaps."""
    n = spec.n
    gen = np.random.Generator(np.random.Philox(key=key))
    starts = []
    for s in range(count):
        gaps = np.ones(n - 1) if s == 0 else gen.uniform(0.1, 1.0, n - 1)
        pos = np.concatenate([[0.0], np.cumsum(gaps)])
        z = np.empty(n)
        z[list(ordering)] = pos
        z -= spec.masses @ z / spec.masses.sum()
        starts.append(z[chart.free] / z[chart.pinned])
    return np.array(starts)


def collinear_solve_component(spec: ProblemSpec, ordering, opts: SolveOptions = SolveOptions(),
                              starts: int | None = None, tol_distinct: float = 1e-8) -> ComponentResult:
    """Collinear central configurations with bodies in the given left-to-right order.

    The chart pins the rightmost body at 1 (it is never at the centroid) and
    eliminates the leftmost one; iterates are kept inside the order cone by
    the line search.  Distinct roots from a deterministic start grid are
    returned together with their collinear fixed-point index and the
    eigenvalues of the collinear block of the self-map derivative.
    """
    if spec.alpha >= -1:
        raise ValueError("collinear solve needs alpha < -1")
    ordering = tuple(int(k) for k in ordering)
    n = spec.n
    if sorted(ordering) != list(range(n)):
        raise ValueError(f"{ordering} is not a permutation of 0..{n - 1}")
    chart = ResidualSystem(spec, pinned=ordering[-1], eliminated=ordering[0])
    if starts is None:
        starts = 6 if spec.sign_definite else 40
    v0 = _collinear_starts(spec, chart, ordering, starts, key=zlib.crc32(bytes(ordering)))
    fun, jac, guard = _collinear_problem(chart, ordering)
    status, v, iters, norm = damped_newton(fun, jac, guard, v0, opts)
    outcomes = []
    roots: list[np.ndarray] = []
    for s, vi, it, nr in zip(status, v, iters, norm):
        st = _STATUSES[s]
        xr = vi.astype(complex) if st is Status.CONVERGED else None
        outcomes.append(SolveOutcome(st, xr, int(it), float(nr)))
        if st is Status.CONVERGED and not any(
                np.max(np.abs(xr - r)) <= tol_distinct * (1 + np.max(np.abs(r))) for r in roots):
            roots.append(xr)
    fp_indices, eigs = [], []
    for r in roots:
        Dg = chart.self_map_jacobian(r)[0::2, 0::2]
        det = np.linalg.det(np.eye(n - 2) - Dg)
        fp_indices.append(1 if det > 0 else -1)
        eigs.append(np.linalg.eigvals(Dg))
    return ComponentResult(ordering, chart, roots, fp_indices, eigs, outcomes)


def collinear_enumerate(spec: ProblemSpec, opts: SolveOptions = SolveOptions(),
                        starts: int | None = None) -> list[ComponentResult]:
    """Run :func:`collinear_solve_component` on each of the n!/2 ordering classes."""
    return [collinear_solve_component(spec, o, opts, starts) for o in orderings(spec.n)]


def collinear_report(spec: ProblemSpec, components: list[ComponentResult] | None = None) -> SearchReport:
    """Deduplicated classes of all collinear roots, as a search report."""
    from .classify import ClassRegistry

    components = components if components is not None else collinear_enumerate(spec)
    registry = ClassRegistry(spec)
    successes = 0
    for k, comp in enumerate(components):
        for r in comp.roots:
            successes += registry.add(r, k, comp.chart)
    return SearchReport(spec=spec, solutions=registry.records(), attempts=len(components),
                        successes=successes, failures={}, rng_seed=0)


def discovery_curve(report: SearchReport) -> list[tuple[int, float]]:
    """(attempt index, reduced potential) of each class in order of discovery."""
    return sorted((r.first_attempt, r.reduced_potential) for r in report.solutions)


def expected_collinear_components(n: int) -> int:
    return math.factorial(n) // 2
