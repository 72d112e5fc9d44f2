"""Trace functionals, residuals and classification of candidate projections."""
from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import matkit
from .errors import (
    CommutingProjections,
    DefectMismatch,
    InconsistentEstimators,
    NonRealTrace,
    OddRank,
)
from .projection import Projection, dual, k_and_spectrum

SOLUTION_TOL = 1e-8
TL_TOL = 1e-8
ESTIMATOR_RTOL = 1e-6
COMMUTING_TOL = 1e-12
BOUND_SLACK = 1e-9

TRIVIAL_ZERO = "trivial-zero"
TRIVIAL_IDENTITY = "trivial-identity"
TEMPERLEY_LIEB = "temperley-lieb"
HECKE_GENERIC = "hecke-generic"
NON_SOLUTION = "non-solution"
SOLUTION_CLASSES = (TRIVIAL_ZERO, TRIVIAL_IDENTITY, TEMPERLEY_LIEB, HECKE_GENERIC)


@dataclass(frozen=True)
class FunctionalCertificate:
    a: float
    b: float
    c: float
    alpha0: float
    F: float
    t: list[float]


@dataclass
class SolutionReport:
    n: int
    r: int
    k: int
    Q: float
    cls: str
    hecke_residual: float
    tl_residual: float
    bounds_ok: bool
    bounds: dict[str, bool | None] = field(default_factory=dict)
    theta: float | None = None

    @property
    def is_solution(self) -> bool:
        return self.cls in SOLUTION_CLASSES

    def to_json(self) -> dict:
        d = asdict(self)
        d["class"] = d.pop("cls")
        d["Q"] = None if math.isnan(self.Q) else self.Q
        return d


def _products(p: Projection) -> tuple[np.ndarray, np.ndarray]:
    return p.p1(), p.p2()


def trace_sequence(p: Projection, m_max: int) -> list[float]:
    """t_m = tr((P_1 P_2)^m) for m = 1..m_max."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    p1, p2 = _products(p)
    m = p1 @ p2
    power = m
    out = []
    for i in range(1, m_max + 1):
        if i > 1:
            power = power @ m
        tr = complex(np.trace(power))
        if abs(tr.imag) > 1e-10:
            raise NonRealTrace(f"tr((P1 P2)^{i}) has imaginary part {tr.imag:.3e}")
        out.append(tr.real)
    return out


def certificate_from_traces(rn: float, t: list[float]) -> FunctionalCertificate:
    t1, t2, t3 = t[0], t[1], t[2]
    a = rn - t1
    b = 2.0 * t2 - 2.0 * t1
    c = t2 - t3
    F = a * c - 0.25 * b * b
    alpha0 = -b / (2.0 * a) if a > 0 else 0.0
    return FunctionalCertificate(a=a, b=b, c=c, alpha0=alpha0, F=F, t=list(t))


def functional_F(p: Projection, m_max: int = 3) -> FunctionalCertificate:
    return certificate_from_traces(p.r * p.n, trace_sequence(p, max(3, m_max)))


def estimate_Q(cert: FunctionalCertificate) -> float:
    t1, t2 = cert.t[0], cert.t[1]
    if t1 - t2 <= COMMUTING_TOL:
        raise CommutingProjections(f"t1 - t2 = {t1 - t2:.3e}: P1 and P2 commute")
    return math.sqrt(cert.a / (t1 - t2))


def h_alpha(p: Projection, alpha: float) -> np.ndarray:
    """P1 P2 P1 - P2 P1 P2 - alpha (P1 - P2)."""
    p1, p2 = _products(p)
    return p1 @ p2 @ p1 - p2 @ p1 @ p2 - alpha * (p1 - p2)


def residuals(p: Projection, Q: float) -> tuple[float, float]:
    """Normalised Hecke and Temperley-Lieb residuals at loop parameter ``Q``."""
    p1, p2 = _products(p)
    q2 = Q * Q
    p121 = p1 @ p2 @ p1
    p212 = p2 @ p1 @ p2
    n1 = 1.0 + matkit.frob(p1)
    n2 = 1.0 + matkit.frob(p2)
    hecke = matkit.frob(q2 * (p121 - p212) - (p1 - p2)) / n1
    tl = max(matkit.frob(q2 * p121 - p1) / n1, matkit.frob(q2 * p212 - p2) / n2)
    return hecke, tl


def q_from_Q(Q: float) -> complex:
    """Root of q + 1/q = Q with q >= 1 for Q >= 2, else q = exp(i*theta).

    Values within ``BOUND_SLACK`` of 2 snap to q = 1.
    """
    if abs(Q - 2.0) <= BOUND_SLACK:
        return 1.0 + 0.0j
    if Q > 2.0:
        return complex((Q + math.sqrt(Q * Q - 4.0)) / 2.0)
    return cmath.exp(1j * math.acos(Q / 2.0))


def check_bounds(n: int, r: int, k: int, Q: float, is_tl: bool) -> dict[str, bool | None]:
    """Parameter constraints satisfied by any nontrivial solution.

    ``None`` marks a constraint that does not apply to these parameters.
    """
    s = BOUND_SLACK
    rn = r * n
    flags: dict[str, bool | None] = {}
    flags["kbounds"] = r * (n * n - r) / (2 * n) - s <= k <= min(rn, n**3 - rn)
    flags["Qrn0"] = rn - k + k / Q <= r * r + s

    flags["kQmin1"] = None
    if not is_tl and 1 < r < n:
        flags["kQmin1"] = (rn - r * r + 1 <= k <= rn - 1) and Q >= (rn - 1) / (r * r - 1) - s

    flags["kQmin2"] = None
    rt = n * n - r
    if not is_tl and n * n - n < r < n * n:
        flags["kQmin2"] = (rt * (n + r - n * n) + 1 <= k <= rt * n) and Q >= n / rt - s

    q_is_2 = abs(Q - 2.0) <= s
    flags["Q2_small_rank"] = None
    flags["Q2_large_rank"] = None
    if Q <= 2.0 + s:
        if n >= 2 * r:
            flags["Q2_small_rank"] = q_is_2 and (n, r) == (2, 1)
        if 2 * r >= 2 * n * n - n:
            flags["Q2_large_rank"] = q_is_2 and (n, r) == (2, 3)

    flags["tl_Q2_integral"] = None
    if is_tl and q_is_2:
        d = n * n - 4 * r
        flags["tl_Q2_integral"] = d >= 0 and math.isqrt(d) ** 2 == d
    return flags


def bounds_pass(flags: dict[str, bool | None]) -> bool:
    return all(v for v in flags.values() if v is not None)


def classify(p: Projection, solution_tol: float = SOLUTION_TOL, tl_tol: float = TL_TOL) -> SolutionReport:
    n, r = p.n, p.r
    if r == 0 or r == n * n:
        cls = TRIVIAL_ZERO if r == 0 else TRIVIAL_IDENTITY
        return SolutionReport(n, r, 0, float("nan"), cls, 0.0, 0.0, True, {})

    try:
        spec = k_and_spectrum(p)
    except OddRank:
        spec = None

    cert = functional_F(p)
    try:
        q_trace = estimate_Q(cert)
    except CommutingProjections:
        q_trace = float("nan")

    if spec is not None and spec.is_solution_spectrum:
        Q = spec.q_estimate
    elif not math.isnan(q_trace):
        Q = q_trace
    else:
        # P1 P2 = P2 P1: the relation reduces to P1 = P2, independent of Q
        Q = 1.0
    hecke_res, tl_res = residuals(p, Q)
    solved = hecke_res < solution_tol

    if solved and spec is None:
        raise OddRank("rank(K_P) is odd on a projection that satisfies the relations")
    if solved and spec.is_solution_spectrum and not math.isnan(q_trace):
        if abs(q_trace - Q) > ESTIMATOR_RTOL * Q:
            raise InconsistentEstimators(f"spectral Q = {Q!r}, trace Q = {q_trace!r}")

    k = spec.k if spec is not None else -1
    if not solved:
        return SolutionReport(n, r, k, float("nan"), NON_SOLUTION, hecke_res, tl_res, False, {})

    is_tl = tl_res < tl_tol
    if is_tl and k != r * n:
        raise InconsistentEstimators(f"Temperley-Lieb residual vanishes but k = {k} != rn = {r * n}")
    flags = check_bounds(n, r, k, Q, is_tl)
    theta = None if Q >= 2.0 - BOUND_SLACK else math.acos(Q / 2.0)
    return SolutionReport(
        n, r, k, Q, TEMPERLEY_LIEB if is_tl else HECKE_GENERIC,
        hecke_res, tl_res, bounds_pass(flags), flags, theta,
    )


def rank_defect_and_pi3(p: Projection, Q: float, tol: float = 1e-9):
    """Rank of Q^2 P1 P2 P1 - P1 and the auxiliary projection built from the dual.

    Returns ``(defect, pi3)``; ``pi3`` is an n^3 x n^3 Hermitian idempotent,
    or ``None`` when Q is too close to 1 for the normalisation.
    """
    n, r = p.n, p.r
    p1, p2 = _products(p)
    k = k_and_spectrum(p).k
    x = Q * Q * p1 @ p2 @ p1 - p1
    # threshold against the size of the terms, not of x: x vanishes for TL solutions
    sv = matkit.singular_values(x)
    defect = int(np.count_nonzero(sv > 1e-8 * (Q * Q + 1.0)))
    if defect != r * n - k:
        raise DefectMismatch(f"rank defect {defect} != rn - k = {r * n - k}")
    if Q <= 1.0 + 1e-9:
        return defect, None

    d1, d2 = _products(dual(p))
    pi3 = (Q * Q * d1 @ d2 @ d1 - d1) / (Q * Q - 1.0)
    scale = 1.0 + matkit.frob(pi3)
    if matkit.hermitian_defect(pi3) > tol * scale or matkit.frob(pi3 @ pi3 - pi3) > tol * scale:
        raise DefectMismatch("Pi3 is not an orthogonal projection")
    expected_tr = n**3 - r * n - k
    if abs(np.trace(pi3).real - expected_tr) > 1e-6:
        raise DefectMismatch(f"tr Pi3 = {np.trace(pi3).real:.6f}, expected {expected_tr}")
    if matkit.frob(p1 @ pi3) > tol or matkit.frob(p2 @ pi3) > tol:
        raise DefectMismatch("Pi3 is not annihilated by P1 and P2")
    return defect, pi3
