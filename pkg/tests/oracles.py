"""Independent reference computations used by the tests.

Nothing here imports heckeproj: each oracle recomputes a quantity from its
definition with plain loops or LAPACK, so agreement is a real cross-check.
"""
from __future__ import annotations

import numpy as np


def kron_loops(a, b):
    a, b = np.asarray(a, complex), np.asarray(b, complex)
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


def legs(P, n):
    eye = np.eye(n)
    return kron_loops(P, eye), kron_loops(eye, P)


def qr_eigvalsh(a, tol=1e-14, max_iter=10_000):
    """Eigenvalues of a Hermitian matrix by shifted QR iteration with deflation."""
    h = np.array(a, complex)
    h = 0.5 * (h + h.conj().T)
    out = []
    while h.shape[0] > 1:
        m = h.shape[0]
        for _ in range(max_iter):
            if np.linalg.norm(h[-1, :-1]) <= tol * (1.0 + np.linalg.norm(h)):
                break
            # Wilkinson shift from the trailing 2x2 block
            a11, a12, a22 = h[-2, -2].real, abs(h[-2, -1]), h[-1, -1].real
            d = 0.5 * (a11 - a22)
            sgn = 1.0 if d >= 0 else -1.0
            mu = a22 - a12 * a12 / (d + sgn * np.hypot(d, a12)) if a12 else a22
            qm, rm = np.linalg.qr(h - mu * np.eye(m))
            h = rm @ qm + mu * np.eye(m)
        else:
            raise RuntimeError("QR oracle did not converge")
        out.append(h[-1, -1].real)
        h = h[:-1, :-1]
    out.append(h[0, 0].real)
    return np.sort(out)


def projection_from_frame_units(mats):
    """P_T = sum_s |vec V_s><vec V_s| written out entry by entry over matrix units."""
    n = mats[0].shape[0]
    P = np.zeros((n * n, n * n), complex)
    for V in mats:
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        P[i * n + j, k * n + l] += V[i, j] * np.conj(V[k, l])
    return P


def trace_powers(P, n, m_max):
    p1, p2 = legs(P, n)
    m = p1 @ p2
    out, power = [], np.eye(m.shape[0])
    for _ in range(m_max):
        power = power @ m
        out.append(np.trace(power).real)
    return out


def random_isometry(rows, cols, rng):
    z = rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))
    q, _ = np.linalg.qr(z)
    return q


def random_projection(n, r, rng):
    u = random_isometry(n * n, r, rng)
    return u @ u.conj().T


def random_frame(n, r, rng):
    """r matrices orthonormal under tr(X* Y), from the columns of a random isometry."""
    u = random_isometry(n * n, r, rng)
    return [u[:, s].reshape(n, n) for s in range(r)]


def hecke_residual(P, n, Q):
    p1, p2 = legs(P, n)
    lhs = Q * Q * (p1 @ p2 @ p1 - p2 @ p1 @ p2)
    return np.linalg.norm(lhs - (p1 - p2)) / (1.0 + np.linalg.norm(p1))


def g_closed_form(a, b, beta):
    """G[A;2] for the raw n = r = 2 family, in closed form."""
    return 8 * a * a * (1 + b**4 - 2 * b * b * np.cos(2 * beta)) / ((1 + a * a) ** 2 * (1 + b * b) ** 2)
