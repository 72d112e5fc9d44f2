"""R-matrices R = qI - QP and checks of the Hecke, braid and TL relations."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import matkit
from .errors import NonRealQ, SingularR
from .projection import EMBED_CAP, Projection, embed, embed_matrix


@dataclass(frozen=True, eq=False)
class RMatrix:
    n: int
    q: complex
    Q: float
    mat: np.ndarray = field(repr=False)


@dataclass(frozen=True, eq=False)
class BaxterizedR:
    base: RMatrix
    lam: complex
    mat: np.ndarray = field(repr=False)


class RelationResiduals(NamedTuple):
    quad: float
    braid: float
    far: float
    herm_or_unit: float


def build_R(p: Projection, q: complex) -> RMatrix:
    q = complex(q)
    if q == 0:
        raise NonRealQ("q must be nonzero")
    Qc = q + 1.0 / q
    if abs(Qc.imag) > 1e-12 or Qc.real <= 0.0:
        raise NonRealQ(f"q + 1/q = {Qc} is not a positive real number")
    Q = Qc.real
    mat = q * np.eye(p.dim, dtype=np.complex128) - Q * p.mat
    mat.flags.writeable = False
    return RMatrix(n=p.n, q=q, Q=Q, mat=mat)


def _generators(R: RMatrix, strands: int) -> list[np.ndarray]:
    if strands < 3:
        raise ValueError("need at least 3 strands")
    return [embed_matrix(R.mat, R.n, strands, i) for i in range(1, strands)]


def relation_check(R: RMatrix, strands: int = 3) -> RelationResiduals:
    gens = _generators(R, strands)
    dim = gens[0].shape[0]
    eye = np.eye(dim, dtype=np.complex128)
    scale = 1.0 + max(matkit.frob(g) for g in gens)
    q = R.q
    quad = max(matkit.frob(g @ g - eye - (q - 1.0 / q) * g) for g in gens)
    braid = max(
        matkit.frob(a @ b @ a - b @ a @ b) for a, b in zip(gens[:-1], gens[1:])
    )
    far = 0.0
    for i in range(len(gens)):
        for m in range(i + 2, len(gens)):
            far = max(far, matkit.frob(gens[i] @ gens[m] - gens[m] @ gens[i]))
    if R.Q >= 2.0:
        hu = max(matkit.frob(g - g.conj().T) for g in gens)
    else:
        hu = max(matkit.frob(g @ g.conj().T - eye) for g in gens)
    return RelationResiduals(quad / scale, braid / scale, far / scale, hu / scale)


def unitarity_residual(R: RMatrix) -> float:
    m = R.mat
    return matkit.frob(m @ m.conj().T - np.eye(m.shape[0])) / (1.0 + matkit.frob(m))


def hermiticity_residual(R: RMatrix) -> float:
    return matkit.hermitian_defect(R.mat) / (1.0 + matkit.frob(R.mat))


def tl_relation_check(p: Projection, Q: float, strands: int = 3) -> float:
    if strands < 3:
        raise ValueError("need at least 3 strands")
    es = [Q * embed(p, strands, i) for i in range(1, strands)]
    scale = 1.0 + max(matkit.frob(e) for e in es)
    res = max(matkit.frob(e @ e - Q * e) for e in es)
    for i in range(len(es)):
        for m in range(len(es)):
            if abs(i - m) == 1:
                res = max(res, matkit.frob(es[i] @ es[m] @ es[i] - es[i]))
            elif abs(i - m) >= 2:
                res = max(res, matkit.frob(es[i] @ es[m] - es[m] @ es[i]))
    return res / scale


def baxterize(R: RMatrix, lam: complex) -> BaxterizedR:
    lam = complex(lam)
    if lam == 0:
        raise ValueError("spectral parameter must be nonzero")
    if abs(np.linalg.det(R.mat)) <= 1e-12:
        raise SingularR("R is singular")
    rinv = np.linalg.inv(R.mat)
    return BaxterizedR(base=R, lam=lam, mat=lam * R.mat - rinv / lam)


def baxterize_check(R: RMatrix, lam: complex, mu: complex) -> float:
    """Braid-form Yang-Baxter residual with multiplicative spectral parameters.

    Checks R1(lam) R2(lam mu) R1(mu) = R2(mu) R1(lam mu) R2(lam) on three strands.
    """
    lam, mu = complex(lam), complex(mu)
    if lam == 0 or mu == 0:
        raise ValueError("spectral parameters must be nonzero")
    if R.n**3 > EMBED_CAP:
        raise ValueError("dimension cap exceeded")

    def site(x: complex, i: int) -> np.ndarray:
        return embed_matrix(baxterize(R, x).mat, R.n, 3, i)

    lhs = site(lam, 1) @ site(lam * mu, 2) @ site(mu, 1)
    rhs = site(mu, 2) @ site(lam * mu, 1) @ site(lam, 2)
    return matkit.frob(lhs - rhs) / (1.0 + matkit.frob(lhs))


def with_matrix(R: RMatrix, mat) -> RMatrix:
    """Same metadata, different matrix (used for perturbation probes)."""
    return RMatrix(n=R.n, q=R.q, Q=R.Q, mat=np.asarray(mat, dtype=np.complex128))
