"""JSON wire formats: complex numbers are [re, im], matrices row-major nested lists."""
from __future__ import annotations

import math

import numpy as np

from .braid import RMatrix
from .errors import HeckeProjError
from .frame import Frame, validate_frame
from .projection import Projection, validate


class MalformedInput(HeckeProjError):
    pass


def complex_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(v, where: str = "value") -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if not (isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v)):
        raise MalformedInput(f"{where}: expected [re, im], got {v!r}")
    return complex(v[0], v[1])


def matrix_to_json(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(v, where: str = "mat") -> np.ndarray:
    if not isinstance(v, list) or not v or not all(isinstance(row, list) for row in v):
        raise MalformedInput(f"{where}: expected a non-empty list of rows")
    width = len(v[0])
    out = np.empty((len(v), width), dtype=np.complex128)
    for i, row in enumerate(v):
        if len(row) != width:
            raise MalformedInput(f"{where}: row {i} has length {len(row)}, expected {width}")
        for j, z in enumerate(row):
            out[i, j] = complex_from_json(z, f"{where}[{i}][{j}]")
    return out


def projection_to_json(p: Projection) -> dict:
    return {"n": p.n, "mat": matrix_to_json(p.mat)}


def projection_from_json(d: dict, tol: float = 1e-9) -> Projection:
    if "mat" not in d:
        raise MalformedInput("projection: missing field 'mat'")
    mat = matrix_from_json(d["mat"], "mat")
    p = validate(mat, tol=tol)
    if "n" in d and d["n"] != p.n:
        raise MalformedInput(f"n: declared {d['n']!r} but matrix implies n = {p.n}")
    return p


def frame_to_json(f: Frame) -> dict:
    return {"n": f.n, "mats": [matrix_to_json(m) for m in f.mats]}


def frame_from_json(d: dict) -> Frame:
    mats = d.get("mats")
    if not isinstance(mats, list) or not mats:
        raise MalformedInput("frame: field 'mats' must be a non-empty list")
    parsed = [matrix_from_json(m, f"mats[{i}]") for i, m in enumerate(mats)]
    f = validate_frame(parsed)
    if "n" in d and d["n"] != f.n:
        raise MalformedInput(f"n: declared {d['n']!r} but matrices are {f.n}x{f.n}")
    return f


def rmatrix_to_json(R: RMatrix) -> dict:
    return {"n": R.n, "q": complex_to_json(R.q), "Q": R.Q, "mat": matrix_to_json(R.mat)}


def rmatrix_from_json(d: dict) -> RMatrix:
    for key in ("n", "q", "Q", "mat"):
        if key not in d:
            raise MalformedInput(f"rmatrix: missing field {key!r}")
    return RMatrix(
        n=int(d["n"]), q=complex_from_json(d["q"], "q"), Q=float(d["Q"]), mat=matrix_from_json(d["mat"])
    )


def clean_floats(obj):
    """Replace NaN/inf with None so the output is strict JSON."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: clean_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean_floats(v) for v in obj]
    if isinstance(obj, complex):
        return complex_to_json(obj)
    if isinstance(obj, np.generic):
        return clean_floats(obj.item())
    return obj
