"""Dense complex linear algebra for tensor powers of small spaces.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  The Hermitian
eigensolver is a cyclic Jacobi method in round-robin (parallel) ordering, so
each round rotates a set of disjoint index pairs with vectorised updates.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian

DEFAULT_RANK_TOL = 1e-8
DEFAULT_CLUSTER_TOL = 1e-7
JACOBI_MAX_SWEEPS = 100
JACOBI_TOL = 1e-13


def as_cmatrix(a) -> np.ndarray:
    """Coerce to a finite 2-D complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or 0 in m.shape:
        raise DimensionMismatch(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def kron(a, b) -> np.ndarray:
    """(a (x) b)[i*rb + k, j*cb + l] = a[i, j] * b[k, l]."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    (ra, ca), (rb, cb) = a.shape, b.shape
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(ra * rb, ca * cb)


def kron_all(*mats) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for m in mats:
        out = kron(out, m)
    return out


def adjoint(a) -> np.ndarray:
    return np.asarray(a).conj().T


def frob(a) -> float:
    return float(np.linalg.norm(a))


def hermitian_defect(a) -> float:
    a = np.asarray(a)
    return frob(a - a.conj().T)


def _round_robin(size: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pairings of a round-robin tournament; every pair appears once per sweep."""
    m = size + (size % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            x, y = players[i], players[m - 1 - i]
            if x < size and y < size:
                ps.append(min(x, y))
                qs.append(max(x, y))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def jacobi_eigh(a, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, v)`` with ascending real eigenvalues ``w`` and unitary ``v``
    whose columns are the eigenvectors.  Convergence is declared when the
    off-diagonal Frobenius mass drops below ``tol * ||a||_F``.
    """
    A = np.array(a, dtype=np.complex128)
    size = A.shape[0]
    if A.shape != (size, size):
        raise DimensionMismatch(f"square matrix required, got {A.shape}")
    A = 0.5 * (A + A.conj().T)
    V = np.eye(size, dtype=np.complex128)
    scale = frob(A)
    if size == 1 or scale == 0.0:
        w = A.diagonal().real.copy()
        order = np.argsort(w, kind="stable")
        return w[order], V[:, order]

    rounds = _round_robin(size)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        for _ in range(max_sweeps):
            off = frob(A - np.diag(A.diagonal()))
            if off < tol * scale:
                break
            for p, q in rounds:
                apq = A[p, q]
                b = np.abs(apq)
                live = b > 0.0
                phase = np.where(live, apq / np.where(live, b, 1.0), 1.0)
                half_gap = (A[q, q].real - A[p, p].real) / (2.0 * np.where(live, b, 1.0))
                t = np.where(half_gap >= 0.0, 1.0, -1.0) / (
                    np.abs(half_gap) + np.sqrt(half_gap * half_gap + 1.0)
                )
                t = np.where(live & np.isfinite(t), t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                cph = phase.conj()

                Ap, Aq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = Ap * c - Aq * (s * cph)
                A[:, q] = Ap * s + Aq * (c * cph)
                Rp, Rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c[:, None] * Rp - (s * phase)[:, None] * Rq
                A[q, :] = s[:, None] * Rp + (c * phase)[:, None] * Rq
                A[p, q] = 0.0
                A[q, p] = 0.0

                Vp, Vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = Vp * c - Vq * (s * cph)
                V[:, q] = Vp * s + Vq * (c * cph)
        else:
            off = frob(A - np.diag(A.diagonal()))
            if off >= tol * scale:
                raise NoConvergence(
                    f"Jacobi: off-diagonal mass {off:.3e} after {max_sweeps} sweeps"
                )
    w = A.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def cluster(values, tol: float = DEFAULT_CLUSTER_TOL) -> list[tuple[float, int]]:
    """Merge sorted values closer than ``tol`` to their neighbour."""
    vals = np.sort(np.asarray(values, dtype=float))
    out: list[tuple[float, int]] = []
    group: list[float] = []
    for v in vals:
        if group and v - group[-1] > tol:
            out.append((float(np.mean(group)), len(group)))
            group = []
        group.append(float(v))
    if group:
        out.append((float(np.mean(group)), len(group)))
    return out


def _check_hermitian(a: np.ndarray, tol: float = 1e-10) -> None:
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"square matrix required, got {a.shape}")
    if hermitian_defect(a) > tol * (1.0 + frob(a)):
        raise NotHermitian(f"||a - a*||_F = {hermitian_defect(a):.3e}")


def eigvalsh(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    _check_hermitian(a)
    return jacobi_eigh(a)[0]


def eig_hermitian(a, cluster_tol: float = DEFAULT_CLUSTER_TOL) -> list[tuple[float, int]]:
    """Clustered spectrum ``[(value, multiplicity), ...]`` in ascending order."""
    return cluster(eigvalsh(a), cluster_tol)


def singular_values(a) -> np.ndarray:
    """Descending singular values.

    Hermitian input uses ``|eig(a)|`` directly; anything else goes through
    ``sqrt(eig(a* a))``, which only resolves values above ~1e-8 of the largest.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.shape[0] == a.shape[1] and hermitian_defect(a) <= 1e-12 * (1.0 + frob(a)):
        sv = np.abs(jacobi_eigh(a)[0])
    else:
        g = a.conj().T @ a if a.shape[0] >= a.shape[1] else a @ a.conj().T
        sv = np.sqrt(np.clip(jacobi_eigh(g)[0], 0.0, None))
    return np.sort(sv)[::-1]


def rank_eps(a, rel_tol: float = DEFAULT_RANK_TOL) -> int:
    sv = singular_values(a)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > rel_tol * sv[0]))


def norms(a) -> tuple[float, float]:
    """(trace norm, Frobenius norm)."""
    return float(np.sum(singular_values(a))), frob(a)


def partial_trace(a, n: int, legs: int, traced_leg: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    dim = n**legs
    if a.shape != (dim, dim):
        raise DimensionMismatch(f"expected {dim}x{dim} for n={n}, legs={legs}; got {a.shape}")
    if not 1 <= traced_leg <= legs:
        raise DimensionMismatch(f"traced_leg must be in 1..{legs}, got {traced_leg}")
    t = a.reshape((n,) * (2 * legs))
    out = np.trace(t, axis1=traced_leg - 1, axis2=legs + traced_leg - 1)
    rest = n ** (legs - 1)
    return out.reshape(rest, rest)
