"""Explicit solution families with their expected invariants.

Each constructor returns a :class:`CatalogEntry` whose ``expected_*`` fields
are regression targets for :func:`heckeproj.hecke.classify`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadParameters, DegenerateParameters, NotTLWeights
from .frame import Frame, to_projection, validate_frame
from .hecke import HECKE_GENERIC, NON_SOLUTION, TEMPERLEY_LIEB, TRIVIAL_IDENTITY, TRIVIAL_ZERO
from .projection import Projection, validate

NAN = float("nan")


@dataclass(eq=False)
class CatalogEntry:
    name: str
    frame: Frame | None
    expected_Q: float
    expected_k: int | None
    expected_class: str
    params: dict = field(default_factory=dict)
    projection: Projection | None = None

    def to_projection(self) -> Projection:
        if self.projection is not None:
            return self.projection
        return to_projection(self.frame)

    @property
    def is_solution(self) -> bool:
        return self.expected_class != NON_SOLUTION


def trivial(n: int, which: str) -> CatalogEntry:
    if n < 2:
        raise BadParameters("n must be >= 2")
    if which == "zero":
        p, cls = validate(np.zeros((n * n, n * n))), TRIVIAL_ZERO
    elif which == "identity":
        p, cls = validate(np.eye(n * n)), TRIVIAL_IDENTITY
    else:
        raise BadParameters(f"unknown trivial solution {which!r}")
    return CatalogEntry(f"trivial-{which}", None, NAN, 0, cls, {"n": n}, projection=p)


def n2r2_family(a: float, b: float, alpha: float = 0.0, beta: float = 0.0) -> CatalogEntry:
    """Rank-2 family on C^2 (x) C^2 built from one diagonal and one antidiagonal matrix.

    Solutions occur for ``a = 0`` (GL_q(1|1)-type, Q = |b| + 1/|b|) and for
    ``b = +-1, beta in pi*Z`` (free-fermion type, q = |(a+1)/(a-1)|).
    """
    v1 = np.array([[a * np.exp(1j * alpha), 0], [0, 1]]) / math.sqrt(a * a + 1)
    v2 = np.array([[0, 1], [b * np.exp(1j * beta), 0]]) / math.sqrt(b * b + 1)
    frame = validate_frame([v1, v2])
    params = {"a": a, "b": b, "alpha": alpha, "beta": beta}

    Q, k, cls = NAN, None, NON_SOLUTION
    if a == 0.0 and b != 0.0:
        Q, k, cls = abs(b) + 1.0 / abs(b), 2, HECKE_GENERIC
    elif abs(1.0 + b**4 - 2.0 * b * b * math.cos(2.0 * beta)) < 1e-12 and abs(a) != 1.0:
        q = abs((a + 1.0) / (a - 1.0))
        Q, k, cls = q + 1.0 / q, 2, HECKE_GENERIC
    return CatalogEntry("n2r2", frame, Q, k, cls, params)


def gl_q11(b: float, beta: float = 0.0) -> CatalogEntry:
    entry = n2r2_family(0.0, b, 0.0, beta)
    entry.name = "gl_q11"
    return entry


def free_fermion(a: float, alpha: float = 0.0, b: float = -1.0) -> CatalogEntry:
    if abs(b) != 1.0:
        raise BadParameters("free-fermion family requires b = +-1")
    entry = n2r2_family(a, b, alpha, 0.0)
    entry.name = "free_fermion"
    return entry


def free_fermion_a(q: float) -> float:
    """Parameter ``a`` whose R-matrix at this q is the displayed free-fermion one."""
    return (1.0 - q) / (1.0 + q)


def n3r3(a: float, b: float, alpha: float = 0.0, beta: float = 0.0) -> CatalogEntry:
    if a == 0.0 and b == 0.0:
        raise DegenerateParameters("(a, b) must not both vanish")
    c = -a - b
    d = math.sqrt(a * a + b * b + c * c)
    ea, eb = np.exp(1j * alpha), np.exp(1j * beta)
    v1 = np.array([[0, a, 0], [b, 0, 0], [0, 0, c * ea]]) / d
    v2 = np.array([[0, 0, b], [0, c * np.exp(-1j * (alpha + beta)), 0], [a, 0, 0]]) / d
    v3 = np.array([[c * eb, 0, 0], [0, 0, a], [0, b, 0]]) / d
    frame = validate_frame([v1, v2, v3])
    params = {"a": a, "b": b, "c": c, "alpha": alpha, "beta": beta}
    return CatalogEntry("n3r3", frame, 2.0, 8, HECKE_GENERIC, params)


def n3r4_condition(z1: complex, z2: complex, z3: complex, z4: complex, tol: float = 1e-10) -> bool:
    m1, m2, m3, m4 = abs(z1), abs(z2), abs(z3), abs(z4)
    first = abs(m3 * abs(m1 - m2) - m4 * (m1 + m2)) <= tol
    second = abs(m4 * abs(m1 - m2) - m3 * (m1 + m2)) <= tol
    return first or second


def n3r4(z1: complex, z2: complex, z3: complex, z4: complex) -> CatalogEntry:
    if z1 == 0 or z2 == 0:
        raise BadParameters("z1 and z2 must be nonzero")
    if z3 == 0 and z4 == 0:
        raise BadParameters("z3 and z4 must not both vanish")
    s12 = math.sqrt(abs(z1) ** 2 + abs(z2) ** 2)
    s34 = math.sqrt(abs(z3) ** 2 + abs(z4) ** 2)
    v1 = np.array([[0, z1, 0], [z2, 0, 0], [0, 0, 0]], dtype=complex) / s12
    v2 = np.array([[0, 0, 0], [0, 0, z2], [0, z1, 0]], dtype=complex) / s12
    v3 = np.array([[z3, 0, 0], [0, 0, 0], [0, 0, z4]], dtype=complex) / s34
    v4 = np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]], dtype=complex) / math.sqrt(2.0)
    frame = validate_frame([v1, v2, v3, v4])
    params = {"z1": z1, "z2": z2, "z3": z3, "z4": z4}
    if n3r4_condition(z1, z2, z3, z4):
        ratio = abs(z1) / abs(z2)
        return CatalogEntry("n3r4", frame, ratio + 1.0 / ratio, 8, HECKE_GENERIC, params)
    return CatalogEntry("n3r4", frame, NAN, None, NON_SOLUTION, params)


def tl_rank1(n: int, weights) -> CatalogEntry:
    w = np.asarray(weights, dtype=float)
    if w.shape != (n,) or np.any(w <= 0):
        raise NotTLWeights(f"need {n} positive weights")
    if abs(float(np.sum(w * w)) - 1.0) > 1e-10:
        raise NotTLWeights("weights must satisfy sum w_i^2 = 1")
    prods = w * w[::-1]
    if np.ptp(prods) > 1e-10:
        raise NotTLWeights(f"w_i * w_(n+1-i) not constant: {prods.tolist()}")
    v = np.zeros((n, n))
    v[np.arange(n), n - 1 - np.arange(n)] = w
    frame = validate_frame([v])
    return CatalogEntry(
        "tl_rank1", frame, 1.0 / float(prods[0]), n, TEMPERLEY_LIEB, {"n": n, "weights": w.tolist()}
    )


def tl_rank1_equal(n: int) -> CatalogEntry:
    return tl_rank1(n, [1.0 / math.sqrt(n)] * n)


def reference_R(name: str, **params) -> np.ndarray:
    """Closed-form 4x4 R-matrices of the two n = r = 2 families."""
    if name == "gl_q11":
        b = float(params.get("b", 2.0))
        beta = float(params.get("beta", 0.0))
        if b == 0.0:
            raise BadParameters("b must be nonzero")
        e = np.exp(1j * beta)
        return np.array(
            [
                [b, 0, 0, 0],
                [0, b - 1.0 / b, -e.conjugate(), 0],
                [0, -e, 0, 0],
                [0, 0, 0, -1.0 / b],
            ],
            dtype=np.complex128,
        )
    if name == "free_fermion":
        q = float(params.get("q", 2.0))
        alpha = float(params.get("alpha", 0.0))
        if q in (0.0, -1.0):
            raise BadParameters("q must be nonzero and != -1")
        qp, qm = q + 1.0 / q, q - 1.0 / q
        e = np.exp(1j * alpha)
        return 0.5 * np.array(
            [
                [qm + 2, 0, 0, e * qm],
                [0, qm, qp, 0],
                [0, qp, qm, 0],
                [e.conjugate() * qm, 0, 0, qm - 2],
            ],
            dtype=np.complex128,
        )
    raise BadParameters(f"unknown reference R-matrix {name!r}")


def standard_solutions() -> list[CatalogEntry]:
    """The solution entries used for regression across the package."""
    return [
        gl_q11(2.0),
        free_fermion(3.0),
        n3r3(1.0, 1.0),
        n3r4(2, 1, 3, 1),
        tl_rank1_equal(2),
    ]
