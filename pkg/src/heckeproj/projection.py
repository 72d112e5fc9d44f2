"""Orthogonal projections on C^{n^2}, their tensor-leg embeddings and K_P."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import matkit
from .errors import (
    BadDimension,
    BadRank,
    DimensionOverflow,
    InconsistentK,
    NotHermitian,
    NotIdempotent,
    OddRank,
    SiteOutOfRange,
)

EMBED_CAP = 4096
VALIDATE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Projection:
    n: int
    mat: np.ndarray = field(repr=False)
    r: int

    @property
    def dim(self) -> int:
        return self.n * self.n

    def p1(self) -> np.ndarray:
        """P (x) I_n on C^{n^3}."""
        return embed(self, 3, 1)

    def p2(self) -> np.ndarray:
        """I_n (x) P on C^{n^3}."""
        return embed(self, 3, 2)


@dataclass(frozen=True)
class SpectralReport:
    eigs: list[tuple[float, int]]
    k: int
    lambda_plus: float
    q_estimate: float
    is_solution_spectrum: bool


def _side(size: int) -> int:
    n = math.isqrt(size)
    if n * n != size or n < 2:
        raise BadDimension(f"matrix size {size} is not n^2 with n >= 2")
    return n


def validate(mat, tol: float = VALIDATE_TOL) -> Projection:
    m = matkit.as_cmatrix(mat)
    if m.shape[0] != m.shape[1]:
        raise BadDimension(f"projection must be square, got {m.shape}")
    n = _side(m.shape[0])
    scale = 1.0 + matkit.frob(m)
    herm = matkit.hermitian_defect(m)
    if herm > tol * scale:
        raise NotHermitian(f"||P - P*||_F = {herm:.3e} exceeds {tol:g}*(1+||P||)")
    idem = matkit.frob(m @ m - m)
    if idem > tol * scale:
        raise NotIdempotent(f"||P^2 - P||_F = {idem:.3e} exceeds {tol:g}*(1+||P||)")
    r = int(round(float(np.trace(m).real)))
    m = m.copy()
    m.flags.writeable = False
    return Projection(n=n, mat=m, r=r)


def embed_matrix(mat: np.ndarray, n: int, strands: int, site: int) -> np.ndarray:
    """I^{(site-1)} (x) mat (x) I^{(strands-site-1)} for a two-leg operator ``mat``."""
    if strands < 2 or not 1 <= site <= strands - 1:
        raise SiteOutOfRange(f"site {site} invalid for {strands} strands")
    if n**strands > EMBED_CAP:
        raise DimensionOverflow(f"n^strands = {n**strands} exceeds cap {EMBED_CAP}")
    left = np.eye(n ** (site - 1), dtype=np.complex128)
    right = np.eye(n ** (strands - site - 1), dtype=np.complex128)
    return matkit.kron_all(left, mat, right)


def embed(p: Projection, strands: int, site: int) -> np.ndarray:
    return embed_matrix(p.mat, p.n, strands, site)


def dual(p: Projection) -> Projection:
    m = np.eye(p.dim, dtype=np.complex128) - p.mat
    m.flags.writeable = False
    return Projection(n=p.n, mat=m, r=p.dim - p.r)


def k_operator(p: Projection) -> np.ndarray:
    """K_P = P_1 - P_2 on C^{n^3}."""
    return p.p1() - p.p2()


def k_and_spectrum(
    p: Projection,
    cluster_tol: float = matkit.DEFAULT_CLUSTER_TOL,
    rank_tol: float = matkit.DEFAULT_RANK_TOL,
) -> SpectralReport:
    kp = k_operator(p)
    w, _ = matkit.jacobi_eigh(kp)
    eigs = matkit.cluster(w, cluster_tol)

    top = float(np.max(np.abs(w))) if w.size else 0.0
    rank = int(np.count_nonzero(np.abs(w) > rank_tol * top)) if top > 0.0 else 0
    if rank % 2:
        raise OddRank(f"rank(K_P) = {rank} is odd; tolerance too loose or too tight")
    k = rank // 2

    cutoff = rank_tol * max(top, 1.0)
    nonzero = [(v, m) for v, m in eigs if abs(v) > cutoff]
    is_sol = False
    lam = float("nan")
    q_est = float("nan")
    if len(nonzero) == 2:
        (vm, mm), (vp, mp) = nonzero
        lam = 0.5 * (vp - vm)
        if abs(vp + vm) <= cluster_tol and mm == mp and 0.0 < lam < 1.0:
            is_sol = True
            q_est = 1.0 / math.sqrt(1.0 - lam * lam)
            if mp != k:
                raise InconsistentK(f"multiplicity {mp} of +lambda differs from rank/2 = {k}")
    return SpectralReport(eigs=eigs, k=k, lambda_plus=lam, q_estimate=q_est, is_solution_spectrum=is_sol)


def random_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed isometry via QR with the R-diagonal made positive."""
    z = rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))
    qmat, rmat = np.linalg.qr(z)
    d = rmat.diagonal()
    ph = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
    return qmat * ph[None, :]


def random_projection(n: int, r: int, seed: int) -> Projection:
    if not 0 <= r <= n * n:
        raise BadRank(f"rank {r} outside 0..{n * n}")
    if r == 0:
        return validate(np.zeros((n * n, n * n)))
    if r == n * n:
        return validate(np.eye(n * n))
    u = random_isometry(n * n, r, np.random.default_rng(seed))
    return from_isometry(u)


def from_isometry(u: np.ndarray) -> Projection:
    p = u @ u.conj().T
    p = 0.5 * (p + p.conj().T)
    return validate(p, tol=1e-10)
