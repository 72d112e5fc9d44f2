import io
import json

import pytest

from heckeproj import cli
from heckeproj.errors import NotOrthonormal


def run(argv, stdin=None, monkeypatch=None, capsys=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def call(monkeypatch, capsys):
    def _call(*argv, stdin=None):
        code, out, err = run(list(argv), stdin, monkeypatch, capsys)
        return code, (json.loads(out) if out.strip() else None), err

    return _call


def test_verify_catalog_frame(call, tmp_path):
    code, entry, _ = call("catalog", "n3r3", "--a", "1", "--b", "1")
    assert code == 0
    path = tmp_path / "frame.json"
    path.write_text(json.dumps(entry["frame"]))
    code, rep, _ = call("verify", str(path))
    assert code == 0
    assert rep["class"] == "hecke-generic" and rep["k"] == 8
    assert rep["Q"] == pytest.approx(2.0, rel=1e-9)


def test_verify_identity_from_stdin(call):
    code, entry, _ = call("catalog", "trivial", "--n", "2", "--which", "identity")
    code, rep, _ = call("verify", "-", stdin=json.dumps(entry["projection"]))
    assert code == 0 and rep["class"] == "trivial-identity"


def test_verify_non_solution_exit_1(call):
    code, entry, _ = call("catalog", "n3r4", "--z", "2", "1", "1", "1")
    assert code == 0 and entry["expected"]["class"] == "non-solution"
    code, rep, _ = call("verify", "-", stdin=json.dumps(entry))
    assert code == 1 and rep["class"] == "non-solution"


def test_verify_tol_override(call):
    _, entry, _ = call("catalog", "n3r3", "--a", "1", "--b", "1")
    code, rep, _ = call("verify", "-", "--tol", "1e-30", stdin=json.dumps(entry))
    assert code == 1 and rep["tolerances"]["solution"] == 1e-30


def test_verify_broken_frame_exit_2(call):
    _, entry, _ = call("catalog", "n3r3", "--a", "1", "--b", "1")
    entry["frame"]["mats"][0][0][2][0] += 1e-3
    code, out, err = call("verify", "-", stdin=json.dumps(entry["frame"]))
    assert code == 2 and out is None and NotOrthonormal.__name__ in err


def test_verify_malformed_json(call):
    code, out, err = call("verify", "-", stdin='{"mat": [[')
    assert code == 2 and out is None and "invalid JSON" in err
    code, out, err = call("verify", "-", stdin='{"n": 2}')
    assert code == 2 and "'mat'" in err


def test_catalog_n3r4(call):
    code, d, _ = call("catalog", "n3r4", "--z", "2", "1", "3", "1")
    assert code == 0 and d["expected"]["Q"] == pytest.approx(2.5) and len(d["frame"]["mats"]) == 4
    assert d["matches_expected"]


def test_catalog_ref_R(call):
    code, d, _ = call("catalog", "ref-R", "--family", "free_fermion", "--q", "3")
    assert code == 0 and d["build_R_deviation"] < 1e-12


def test_rmatrix_gl_q11(call):
    code, d, _ = call("rmatrix", "gl_q11", "--b", "2", "--strands", "3")
    assert code == 0
    assert max(d["residuals"].values()) < 1e-10
    assert d["baxterize_max"] < 1e-10 and d["reference_deviation"] < 1e-12


def test_rmatrix_tl_four_strands(call):
    code, d, _ = call("rmatrix", "tl-rank1", "--n", "2", "--strands", "4")
    assert code == 0 and d["tl_residual"] < 1e-10


def test_rmatrix_non_solution(call):
    code, d, _ = call("rmatrix", "n2r2", "--a", "1", "--b", "1", "--beta", "0.7853981633974483")
    assert code == 1 and d["report"]["class"] == "non-solution"


def test_bounds(call):
    code, d, _ = call("bounds", "--n", "3", "--r", "1", "--k", "2", "--Q", "3")
    assert code == 1 and d["flags"]["Qrn0"] is False
    code, d, _ = call("bounds", "--n", "2", "--r", "2", "--k", "2", "--Q", "2.5")
    assert code == 0 and d["pass"]
    code, _, _ = call("bounds", "--n", "1", "--r", "1", "--k", "2", "--Q", "3")
    assert code == 2


def test_search_tl(call):
    code, d, _ = call("search", "-", stdin='{"n": 2, "r": 1, "seed": 7}')
    assert code == 0 and d["report"]["class"] == "temperley-lieb" and d["converged"]


def test_search_bad_config(call):
    code, out, err = call("search", "-", stdin='{"n": 2, "r": 5}')
    assert code == 2 and out is None and "r must be" in err
    code, _, err = call("search", "-", stdin='{"n": 2, "r": 1, "startz": 3}')
    assert code == 2 and "startz" in err


def test_unknown_verb_and_flag_rejected(capsys):
    for argv in (["frobnicate"], ["bounds", "--n", "2", "--bogus", "1"]):
        with pytest.raises(SystemExit) as exc:
            cli.main(argv)
        assert exc.value.code == 2
    assert capsys.readouterr().out == ""


@pytest.mark.slow
def test_search_3_3_64_starts(call):
    code, d, _ = call("search", "-", stdin='{"n": 3, "r": 3, "starts": 64, "seed": 1}')
    assert code == 0 and d["report"]["hecke_residual"] < 1e-9
