"""Multi-start Riemannian descent of F over rank-r orthogonal projections.

A projection is parametrised as P = U U* with U an n^2 x r isometry, so the
rank is fixed by construction.  Solutions of the Hecke relations are exactly
the zeros of F (away from commuting P1, P2), hence the global minima.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import matkit
from .errors import BadParameters, NotIsometry, RankDrift
from .hecke import SOLUTION_TOL, SolutionReport, classify
from .projection import Projection, random_isometry, validate


@dataclass(frozen=True)
class SearchConfig:
    n: int
    r: int
    starts: int = 32
    max_iters: int = 5000
    f_tol: float = 1e-18
    step0: float = 0.1
    seed: int = 0
    polish_tol: float = 1e-12
    workers: int = 1
    stall_window: int = 200

    def __post_init__(self):
        if self.n < 2:
            raise BadParameters("n must be >= 2")
        if not 1 <= self.r <= self.n * self.n - 1:
            raise BadParameters(f"r must be in 1..{self.n * self.n - 1}, got {self.r}")
        if self.starts < 1 or self.max_iters < 0 or self.workers < 1 or self.stall_window < 0:
            raise BadParameters("starts, workers >= 1 and max_iters, stall_window >= 0 required")
        if min(self.f_tol, self.step0, self.polish_tol) <= 0:
            raise BadParameters("tolerances and step0 must be positive")


@dataclass
class StartOutcome:
    index: int
    F: float
    iterations: int
    U: np.ndarray = field(repr=False)


@dataclass
class SearchResult:
    best_F: float
    projection: Projection
    report: SolutionReport
    iterations: int
    converged: bool
    best_start: int = -1
    start_F: list[float] = field(default_factory=list)

    def to_json(self) -> dict:
        from .serialize import projection_to_json

        return {
            "best_F": self.best_F,
            "iterations": self.iterations,
            "converged": self.converged,
            "best_start": self.best_start,
            "start_F": self.start_F,
            "report": self.report.to_json(),
            "projection": projection_to_json(self.projection),
        }


# ---------------------------------------------------------------------------
# objective and gradient


def _legs(P: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    eye = np.eye(n, dtype=np.complex128)
    return matkit.kron(P, eye), matkit.kron(eye, P)


def _traces(P: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray, list[np.ndarray]]:
    p1, p2 = _legs(P, n)
    m1 = p1 @ p2
    m2 = m1 @ m1
    t = np.array([np.trace(m1).real, np.trace(m2).real, np.trace(m2 @ m1).real])
    return p1, p2, [m1, m2, t]


def trace_objective(P: np.ndarray, n: int, rn: float) -> float:
    """F = (rn - t1)(t2 - t3) - (t1 - t2)^2 straight from the trace polynomial."""
    *_, (_, _, t) = _traces(P, n)
    return float((rn - t[0]) * (t[1] - t[2]) - (t[0] - t[1]) ** 2)


def stable_objective(P: np.ndarray, n: int, rn: float) -> float:
    """Same value as :func:`trace_objective` on projections, computed as a * tr(H^2) / 2.

    The norm of H = P1P2P1 - P2P1P2 - alpha0 (P1 - P2) carries no cancellation,
    so values far below the rounding floor of the trace polynomial resolve.
    """
    p1, p2, (m1, _, t) = _traces(P, n)
    a = rn - t[0]
    if a <= 1e-14:
        return 0.0
    alpha0 = (t[0] - t[1]) / a
    h = m1 @ p1 - p2 @ p1 @ p2 - alpha0 * (p1 - p2)
    return float(a * 0.5 * np.vdot(h, h).real)


def trace_objective_grad(P: np.ndarray, n: int, rn: float) -> np.ndarray:
    """Hermitian G with dF = tr(G dP) for Hermitian dP."""
    p1, p2, (m1, m2, t) = _traces(P, n)
    a = rn - t[0]
    b = 2.0 * (t[1] - t[0])
    c = t[1] - t[2]

    def dtrace(power: np.ndarray | None, m: int) -> np.ndarray:
        left = p2 if power is None else p2 @ power
        right = p1 if power is None else power @ p1
        return m * (matkit.partial_trace(left, n, 3, 3) + matkit.partial_trace(right, n, 3, 1))

    g = (b - c) * dtrace(None, 1) + (a - b) * dtrace(m1, 2) - a * dtrace(m2, 3)
    return 0.5 * (g + g.conj().T)


def _f_of_u(U: np.ndarray, n: int, rn: float) -> float:
    return trace_objective(U @ U.conj().T, n, rn)


def euclidean_grad(U: np.ndarray, n: int, rn: float) -> np.ndarray:
    """Gradient of U -> F(U U*) in the real inner product Re tr(X* Y)."""
    return 2.0 * trace_objective_grad(U @ U.conj().T, n, rn) @ U


def riemannian_grad(U: np.ndarray, n: int, rn: float) -> np.ndarray:
    z = euclidean_grad(U, n, rn)
    s = U.conj().T @ z
    return z - U @ (0.5 * (s + s.conj().T))


def fd_gradient(U: np.ndarray, n: int, rn: float, h: float = 1e-5) -> np.ndarray:
    """Central finite-difference gradient of the trace polynomial, entry by entry."""
    g = np.zeros_like(U)
    for idx in np.ndindex(*U.shape):
        for unit in (1.0, 1j):
            E = np.zeros_like(U)
            E[idx] = unit * h
            d = (_f_of_u(U + E, n, rn) - _f_of_u(U - E, n, rn)) / (2.0 * h)
            g[idx] += d * unit
    return g


def gradient_check(U: np.ndarray, n: int, h: float = 1e-5) -> float:
    """Relative mismatch between analytic and finite-difference gradients."""
    rn = U.shape[1] * n
    an = euclidean_grad(U, n, rn)
    fd = fd_gradient(U, n, rn, h)
    return matkit.frob(an - fd) / max(matkit.frob(an), 1e-300)


def retract(X: np.ndarray) -> np.ndarray:
    qmat, rmat = np.linalg.qr(X)
    d = rmat.diagonal()
    ph = d / np.where(np.abs(d) > 0, np.abs(d), 1.0)
    ph = np.where(np.abs(d) > 0, ph, 1.0)
    return qmat * ph[None, :]


def objective(U: np.ndarray, n: int | None = None) -> float:
    """F[U U*] for an isometry U of shape (n^2, r)."""
    U = np.asarray(U, dtype=np.complex128)
    if n is None:
        n = math.isqrt(U.shape[0])
    if n * n != U.shape[0]:
        raise NotIsometry(f"row count {U.shape[0]} is not a perfect square")
    dev = matkit.frob(U.conj().T @ U - np.eye(U.shape[1]))
    if dev > 1e-8:
        raise NotIsometry(f"||U*U - I||_F = {dev:.3e}")
    return stable_objective(U @ U.conj().T, n, U.shape[1] * n)


# ---------------------------------------------------------------------------
# descent


def descend(
    U: np.ndarray,
    n: int,
    max_iters: int,
    f_tol: float,
    step0: float,
    stall_window: int = 0,
) -> tuple[np.ndarray, float, int]:
    """Backtracking Riemannian gradient descent; returns (U, F, iterations).

    With ``stall_window > 0`` a run stops once F has failed to halve over that
    many iterations (slow drift toward Q -> infinity, or a plateau).
    """
    rn = U.shape[1] * n
    f = stable_objective(U @ U.conj().T, n, rn)
    history = [f]
    step = step0
    it = 0
    while it < max_iters and f >= f_tol:
        if stall_window and len(history) > stall_window and f > 0.5 * history[-1 - stall_window]:
            break
        g = riemannian_grad(U, n, rn)
        gg = float(np.vdot(g, g).real)
        if gg == 0.0:
            break
        trial = min(step * 2.0, 1e6)
        accepted = False
        for _ in range(80):
            V = retract(U - trial * g)
            fv = stable_objective(V @ V.conj().T, n, rn)
            if fv < f:
                accepted = True
                break
            trial *= 0.5
        if not accepted:
            break
        U, f, step = V, fv, trial
        history.append(f)
        it += 1
    return U, f, it


def _run_start(args) -> StartOutcome:
    config, index, U0 = args
    if U0 is None:
        ss = np.random.SeedSequence(config.seed).spawn(config.starts)[index]
        U0 = random_isometry(config.n * config.n, config.r, np.random.default_rng(ss))
    U, f, it = descend(
        U0, config.n, config.max_iters, config.f_tol, config.step0, config.stall_window
    )
    return StartOutcome(index=index, F=f, iterations=it, U=U)


def _map_starts(config: SearchConfig, jobs: list) -> list[StartOutcome]:
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as ex:
            return list(ex.map(_run_start, jobs))
    return [_run_start(j) for j in jobs]


def polish(p, steps: int = 200, tol: float = 1e-12) -> Projection:
    """Round a near-projection to an exact rank-r projection, then descend briefly.

    Accepts a :class:`Projection` or a raw square matrix with ||P^2 - P|| < 0.1.
    """
    mat = p.mat if isinstance(p, Projection) else np.asarray(p, dtype=np.complex128)
    dim = mat.shape[0]
    n = math.isqrt(dim)
    if n * n != dim:
        raise BadParameters(f"size {dim} is not a perfect square")
    if matkit.frob(mat @ mat - mat) >= 0.1:
        raise BadParameters("input is not close to an idempotent")
    herm = 0.5 * (mat + mat.conj().T)
    r = int(round(float(np.trace(herm).real)))
    w, v = matkit.jacobi_eigh(herm)
    if int(np.count_nonzero(w > 0.5)) != r:
        raise RankDrift(f"spectral rounding gives rank {np.count_nonzero(w > 0.5)}, trace says {r}")
    if r in (0, dim):
        return validate(np.zeros((dim, dim)) if r == 0 else np.eye(dim), tol=tol)
    U = v[:, w > 0.5]
    rn = r * n
    f0 = stable_objective(U @ U.conj().T, n, rn)
    U2, f2, _ = descend(U, n, steps, 0.0, 0.1)
    if f2 <= f0:
        U = U2
    out = U @ U.conj().T
    return validate(0.5 * (out + out.conj().T), tol=tol)


def _sort_key(o: StartOutcome, f_tol: float, report: SolutionReport | None):
    if o.F < f_tol and report is not None and report.is_solution:
        return (0, report.hecke_residual, report.k, o.index)
    return (1, o.F, 0, o.index)


def minimize(config: SearchConfig, initial: list[np.ndarray] | None = None) -> SearchResult:
    """Multi-start descent; the best start is polished and classified.

    ``initial`` optionally replaces the random starting isometries.
    """
    if initial is not None:
        jobs = [(config, i, np.asarray(U, dtype=np.complex128)) for i, U in enumerate(initial)]
    else:
        jobs = [(config, i, None) for i in range(config.starts)]
    outcomes = _map_starts(config, jobs)

    keyed = []
    for o in outcomes:
        report = None
        if o.F < config.f_tol:
            report = classify(validate(o.U @ o.U.conj().T, tol=1e-10))
        keyed.append((_sort_key(o, config.f_tol, report), o))
    keyed.sort(key=lambda kv: kv[0])
    best = keyed[0][1]

    proj = polish(validate(best.U @ best.U.conj().T, tol=1e-10), tol=config.polish_tol)
    n = config.n
    best_F = stable_objective(proj.mat, n, proj.r * n)
    report = classify(proj)
    converged = best_F < config.f_tol and report.hecke_residual < SOLUTION_TOL and report.is_solution
    return SearchResult(
        best_F=best_F,
        projection=proj,
        report=report,
        iterations=best.iterations,
        converged=converged,
        best_start=best.index,
        start_F=[o.F for o in outcomes],
    )


def config_to_json(config: SearchConfig) -> dict:
    return asdict(config)
