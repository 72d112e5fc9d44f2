import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heckeproj import catalog
from heckeproj.braid import build_R
from heckeproj.errors import NotOrthonormal
from heckeproj.projection import random_projection
from heckeproj.serialize import (
    MalformedInput,
    clean_floats,
    frame_from_json,
    frame_to_json,
    matrix_from_json,
    projection_from_json,
    projection_to_json,
    rmatrix_from_json,
    rmatrix_to_json,
)


def through_text(obj):
    return json.loads(json.dumps(obj))


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 3), st.data())
def test_projection_round_trip(n, data):
    r = data.draw(st.integers(0, n * n))
    p = random_projection(n, r, data.draw(st.integers(0, 2**31)))
    back = projection_from_json(through_text(projection_to_json(p)))
    assert back.r == p.r and np.abs(back.mat - p.mat).max() <= 1e-15


def test_frame_round_trip():
    f = catalog.n3r4(2, 1, 3, 1).frame
    back = frame_from_json(through_text(frame_to_json(f)))
    for a, b in zip(f.mats, back.mats):
        assert np.abs(a - b).max() <= 1e-15


def test_rmatrix_round_trip():
    R = build_R(catalog.gl_q11(2.0, 0.3).to_projection(), 2.0)
    back = rmatrix_from_json(through_text(rmatrix_to_json(R)))
    assert back.q == R.q and back.Q == R.Q and np.abs(back.mat - R.mat).max() <= 1e-15


def test_complex_encoding():
    assert matrix_from_json([[[1, 2], 3]])[0].tolist() == [1 + 2j, 3 + 0j]


@pytest.mark.parametrize(
    "payload,field",
    [
        ({"n": 2}, "mat"),
        ({"mat": [[[1, 0], [0, 0]], [[0, 0]]]}, "row 1"),
        ({"mat": [[[1, 0, 0]]]}, r"mat\[0\]\[0\]"),
        ({"mat": "nope"}, "mat"),
    ],
)
def test_malformed_projection_names_field(payload, field):
    with pytest.raises(MalformedInput, match=field):
        projection_from_json(payload)


def test_declared_n_must_match():
    d = projection_to_json(random_projection(2, 1, 0))
    d["n"] = 3
    with pytest.raises(MalformedInput, match="n:"):
        projection_from_json(d)


def test_frame_orthonormality_enforced():
    d = frame_to_json(catalog.n3r3(1, 1).frame)
    d["mats"][0][0][2][0] += 1e-3
    with pytest.raises(NotOrthonormal):
        frame_from_json(d)


def test_clean_floats():
    assert clean_floats({"a": float("nan"), "b": [1.0, float("inf")], "c": 1 + 2j}) == {
        "a": None,
        "b": [1.0, None],
        "c": [1.0, 2.0],
    }
