import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heckeproj import catalog
from heckeproj.errors import CommutingProjections
from heckeproj.hecke import (
    HECKE_GENERIC,
    NON_SOLUTION,
    TEMPERLEY_LIEB,
    TRIVIAL_IDENTITY,
    TRIVIAL_ZERO,
    bounds_pass,
    certificate_from_traces,
    check_bounds,
    classify,
    estimate_Q,
    functional_F,
    h_alpha,
    q_from_Q,
    rank_defect_and_pi3,
    residuals,
    trace_sequence,
)
from heckeproj.projection import random_projection, validate

from oracles import hecke_residual, trace_powers

GL = catalog.gl_q11(2.0).to_projection()
N3R3 = catalog.n3r3(1, 1).to_projection()
N3R4 = catalog.n3r4(2, 1, 3, 1).to_projection()


def tl_25():
    q, Q = 2.0, 2.5
    return catalog.tl_rank1(2, [math.sqrt(q / Q), math.sqrt(1 / (q * Q))]).to_projection()


def test_trace_sequence_identity():
    assert trace_sequence(validate(np.eye(4)), 3) == pytest.approx([8, 8, 8])


def test_trace_sequence_frozen_values():
    # frozen from the loop-kron oracle in tests/oracles.py
    assert trace_sequence(GL, 3) == pytest.approx([2.32, 2.0512, 2.008192], abs=1e-12)
    assert trace_sequence(N3R3, 2) == pytest.approx([3.0, 1.5], abs=1e-12)


def test_trace_sequence_matches_oracle():
    p = random_projection(2, 3, seed=4)
    assert trace_sequence(p, 4) == pytest.approx(trace_powers(p.mat, 2, 4), abs=1e-12)


def test_trace_sequence_rejects_zero_length():
    with pytest.raises(ValueError):
        trace_sequence(GL, 0)


def test_functional_examples():
    zero = functional_F(validate(np.zeros((4, 4))))
    assert zero.F == 0
    cert = functional_F(GL)
    assert abs(cert.F) < 1e-12
    assert cert.alpha0 == pytest.approx(0.16, abs=1e-12)
    assert cert.a == pytest.approx(1.68) and cert.c == pytest.approx(0.043008)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.data())
def test_functional_nonnegative_and_certificate(n, data):
    r = data.draw(st.integers(1, n * n - 1))
    p = random_projection(n, r, data.draw(st.integers(0, 2**31)))
    cert = functional_F(p)
    assert cert.a >= -1e-12 and cert.c >= -1e-12
    assert cert.F >= -1e-9 * (1 + cert.a * cert.c)
    if cert.a > 1e-6:
        assert -1e-12 <= cert.alpha0 <= 1 + 1e-12
        h = h_alpha(p, cert.alpha0)
        assert 0.5 * np.vdot(h, h).real == pytest.approx(cert.F / cert.a, abs=1e-10)


def test_certificate_from_traces_arithmetic():
    cert = certificate_from_traces(4, [2.32, 2.0512, 2.008192])
    assert cert.b == pytest.approx(-0.5376)
    assert abs(cert.F) < 1e-12


@pytest.mark.parametrize("p,Q", [(GL, 2.5), (N3R3, 2.0), (N3R4, 2.5)])
def test_estimate_Q(p, Q):
    assert estimate_Q(functional_F(p)) == pytest.approx(Q, rel=1e-9)


def test_estimate_Q_commuting():
    with pytest.raises(CommutingProjections):
        estimate_Q(functional_F(validate(np.eye(4))))


def test_residual_examples():
    assert residuals(validate(np.zeros((4, 4))), 3.3) == (0.0, 0.0)
    h, t = residuals(GL, 2.5)
    assert h < 1e-12 and t > 0.1
    h, t = residuals(tl_25(), 2.5)
    assert h < 1e-12 and t < 1e-12


def test_residual_matches_oracle():
    p = random_projection(2, 2, seed=8)
    assert residuals(p, 2.2)[0] == pytest.approx(hecke_residual(p.mat, 2, 2.2), rel=1e-12)


def test_q_from_Q_branches():
    assert q_from_Q(2.5) == pytest.approx(2.0)
    assert q_from_Q(2.0) == 1.0
    q = q_from_Q(1.5)
    assert abs(q) == pytest.approx(1.0) and (q + 1 / q).real == pytest.approx(1.5)


def test_classify_examples():
    ident = classify(validate(np.eye(4)))
    assert ident.cls == TRIVIAL_IDENTITY and ident.k == 0 and ident.is_solution
    assert classify(validate(np.zeros((9, 9)))).cls == TRIVIAL_ZERO
    rep = classify(catalog.free_fermion(3.0).to_projection())
    assert (rep.cls, rep.n, rep.r, rep.k) == (HECKE_GENERIC, 2, 2, 2)
    assert rep.Q == pytest.approx(2.5, rel=1e-9)
    rep = classify(N3R4)
    assert (rep.cls, rep.k) == (HECKE_GENERIC, 8) and rep.Q == pytest.approx(2.5, rel=1e-9)


def test_classify_tl():
    rep = classify(tl_25())
    assert rep.cls == TEMPERLEY_LIEB and rep.k == rep.r * rep.n == 2
    assert rep.Q == pytest.approx(2.5, rel=1e-9) and rep.bounds_ok


def test_classify_non_solution_and_json():
    rep = classify(random_projection(2, 2, seed=1))
    assert rep.cls == NON_SOLUTION and not rep.is_solution
    d = rep.to_json()
    assert d["class"] == NON_SOLUTION and d["Q"] is None


def test_classify_theta_below_two():
    # n = 2 TL with w1 = w2 gives Q = 2 exactly: no theta
    rep = classify(catalog.tl_rank1_equal(2).to_projection())
    assert rep.theta is None and rep.Q == pytest.approx(2.0)


def test_rank_defect_examples():
    assert rank_defect_and_pi3(GL, 2.5)[0] == 2
    defect, pi3 = rank_defect_and_pi3(N3R3, 2.0)
    assert defect == 1 and np.trace(pi3).real == pytest.approx(10)
    assert rank_defect_and_pi3(tl_25(), 2.5)[0] == 0


def test_bounds_examples():
    flags = check_bounds(2, 2, 2, 2.5, False)
    assert flags["kbounds"] and flags["Qrn0"] and bounds_pass(flags)
    flags = check_bounds(3, 4, 8, 2.5, False)
    assert flags["kbounds"] and flags["Qrn0"] and bounds_pass(flags)
    flags = check_bounds(3, 1, 2, 3.0, False)
    assert flags["Qrn0"] is False and not bounds_pass(flags)


def test_bounds_small_Q_exclusions():
    # Q <= 2 with n >= 2r only for (n, r) = (2, 1) at Q = 2
    assert check_bounds(2, 1, 2, 2.0, True)["Q2_small_rank"] is True
    assert check_bounds(3, 1, 3, 1.9, True)["Q2_small_rank"] is False
    assert check_bounds(2, 3, 2, 1.5, False)["Q2_large_rank"] is False
    assert check_bounds(2, 1, 2, 2.0, True)["tl_Q2_integral"] is True
    assert check_bounds(3, 1, 3, 2.0, True)["tl_Q2_integral"] is False
