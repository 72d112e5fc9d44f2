"""Projections generated by trace-orthonormal families of n x n matrices.

Notation used throughout: ``V.conj()`` is the entrywise conjugate (V-bar),
``V.T`` the plain transpose and ``V.conj().T`` the conjugate transpose V*.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import matkit
from .errors import DimensionMismatch, NotOrthonormal, RankDeficientFamily
from .hecke import trace_sequence
from .projection import Projection, validate

FRAME_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Frame:
    n: int
    r: int
    mats: list[np.ndarray] = field(repr=False)


@dataclass(eq=False)
class FrameAnalysis:
    n: int
    r: int
    W: np.ndarray = field(repr=False)
    A: np.ndarray = field(repr=False)
    a_spectrum: list[tuple[float, int]]
    tr_A: float
    tr_A2: float
    g_values: dict[int, float]
    g_roots: list[int]
    tl_flag: bool
    Q_from_A: float | None
    k_from_A: int | None


def _as_mats(mats) -> list[np.ndarray]:
    out = [matkit.as_cmatrix(m) for m in mats]
    if not out:
        raise DimensionMismatch("empty matrix family")
    n = out[0].shape[0]
    for m in out:
        if m.shape != (n, n):
            raise DimensionMismatch(f"all matrices must be {n}x{n}, got {m.shape}")
    return out


def gram(mats) -> np.ndarray:
    """G[s, m] = tr(V_s* V_m)."""
    vecs = np.stack([m.reshape(-1) for m in mats], axis=1)
    return vecs.conj().T @ vecs


def validate_frame(mats, tol: float = FRAME_TOL) -> Frame:
    ms = _as_mats(mats)
    g = gram(ms)
    w = matkit.jacobi_eigh(g)[0]
    if w[0] <= 1e-10 * max(1.0, w[-1]):
        raise RankDeficientFamily(f"Gram matrix is singular (smallest eigenvalue {w[0]:.3e})")
    dev = np.abs(g - np.eye(len(ms)))
    if dev.max() > tol:
        s, m = np.unravel_index(int(np.argmax(dev)), dev.shape)
        raise NotOrthonormal(
            f"tr(V_{s + 1}* V_{m + 1}) = {complex(g[s, m]):.6g} deviates by {dev[s, m]:.3e}"
        )
    for m in ms:
        m.flags.writeable = False
    return Frame(n=ms[0].shape[0], r=len(ms), mats=ms)


def orthonormalize(mats) -> Frame:
    """Modified Gram-Schmidt under <X, Y> = tr(X* Y)."""
    out: list[np.ndarray] = []
    for v in _as_mats(mats):
        v = v.copy()
        for u in out:
            v = v - np.vdot(u, v) * u
        norm = matkit.frob(v)
        if norm < 1e-12:
            raise RankDeficientFamily("family is linearly dependent")
        out.append(v / norm)
    return validate_frame(out)


def to_projection(f: Frame) -> Projection:
    # entry ((a,b),(c,d)) of P is sum_s V_s[a,b] conj(V_s[c,d])
    vecs = np.stack([m.reshape(-1) for m in f.mats], axis=1)
    p = vecs @ vecs.conj().T
    return validate(0.5 * (p + p.conj().T), tol=1e-10)


def coupling_matrix(f: Frame) -> np.ndarray:
    """W with (s, m) block V_m V_s-bar."""
    n, r = f.n, f.r
    w = np.zeros((r * n, r * n), dtype=np.complex128)
    for s in range(r):
        for m in range(r):
            w[s * n:(s + 1) * n, m * n:(m + 1) * n] = f.mats[m] @ f.mats[s].conj()
    return w


def g_functional(tr_a: float, tr_a2: float, rn: int, k: int) -> float:
    return (k - rn + tr_a) ** 2 - k * (k - rn + tr_a2)


def coupling_analysis(f: Frame, cluster_tol: float = matkit.DEFAULT_CLUSTER_TOL) -> FrameAnalysis:
    n, r = f.n, f.r
    rn = r * n
    W = coupling_matrix(f)
    A = W @ W.conj().T
    A = 0.5 * (A + A.conj().T)
    spectrum = matkit.eig_hermitian(A, cluster_tol)
    tr_a = float(np.trace(A).real)
    tr_a2 = float(np.trace(A @ A).real)

    g_values = {k: g_functional(tr_a, tr_a2, rn, k) for k in range(1, rn + 1)}
    g_tol = 1e-8 * (1.0 + tr_a) ** 2
    g_roots = [k for k, g in g_values.items() if abs(g) < g_tol]

    tl_flag = False
    Q = k = None
    if len(spectrum) == 1:
        val = spectrum[0][0]
        if 0.0 < val < 1.0 - cluster_tol:
            tl_flag = True
            Q, k = 1.0 / math.sqrt(val), rn
    elif len(spectrum) == 2:
        (lo, mult_lo), (hi, _) = spectrum
        if abs(hi - 1.0) <= cluster_tol and 0.0 < lo < 1.0:
            Q, k = 1.0 / math.sqrt(lo), mult_lo
    return FrameAnalysis(n, r, W, A, spectrum, tr_a, tr_a2, g_values, g_roots, tl_flag, Q, k)


def functional_G(analysis: FrameAnalysis, k: int) -> float:
    rn = analysis.r * analysis.n
    if not 1 <= k <= rn:
        raise ValueError(f"k must be in 1..{rn}")
    return g_functional(analysis.tr_A, analysis.tr_A2, rn, k)


def trace_equivalence_check(f: Frame, m_max: int) -> float:
    """max_m |tr((P_T)_1 (P_T)_2)^m - tr(A^m)| for m = 1..m_max."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    t = trace_sequence(to_projection(f), m_max)
    W = coupling_matrix(f)
    A = W @ W.conj().T
    power = np.eye(A.shape[0], dtype=np.complex128)
    dev = 0.0
    for m in range(1, m_max + 1):
        power = power @ A
        dev = max(dev, abs(t[m - 1] - complex(np.trace(power)).real))
    return dev


def frame_from_projection(p: Projection) -> Frame:
    """Orthonormal frame spanning range(P): eigenvectors reshaped to n x n."""
    w, v = matkit.jacobi_eigh(p.mat)
    cols = v[:, w > 0.5]
    return validate_frame([cols[:, i].reshape(p.n, p.n) for i in range(cols.shape[1])])
