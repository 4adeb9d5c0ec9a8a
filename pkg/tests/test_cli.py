import json
from pathlib import Path

import pytest

from dgweight import cli

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_triangle(capsys):
    code, out = run(capsys, "snc", "--input", str(FIXTURES / "triangle.json"))
    assert code == 0
    assert json.loads(out)["results"] == {"homology": {"0": [0], "1": [0]}}


def test_bad_mc(capsys):
    code, out = run(capsys, "validate", "--input", str(FIXTURES / "invalid" / "bad_mc.json"))
    report = json.loads(out)
    assert code == 1 and report["status"] == "invalid"
    assert any("Maurer-Cartan" in d and "(0,2)" in d for d in report["diagnostics"])


def test_one_slot_range(capsys):
    code, out = run(capsys, "homology", "--input", str(FIXTURES / "one_slot.json"), "--degree-range", "-2..2")
    groups = json.loads(out)["results"]["homology"]
    assert code == 0 and list(groups) == ["-1", "-2", "0", "1", "2"]
    assert {k for k, v in groups.items() if v} == {"0"}


def test_text_format(capsys):
    code, out = run(capsys, "homology", "--input", str(FIXTURES / "complex_rp2.json"), "--format", "text")
    assert code == 0
    assert out.splitlines()[:5] == ["status: ok", "homology:", "  0  Z", "  1  Z/2", "  2  0"]


def test_witnesses(capsys):
    code, out = run(capsys, "snc", "--input", str(FIXTURES / "triangle.json"), "--witnesses")
    wit = json.loads(out)["results"]["witnesses"]
    assert set(wit) == {"0", "1"} and set(wit["1"]) == {"generators", "relations"}


def test_wrong_kind(capsys):
    code, out = run(capsys, "ks", "--input", str(FIXTURES / "triangle.json"))
    assert code == 1 and "does not accept" in json.loads(out)["diagnostics"][0]


def test_usage_errors(capsys):
    assert run(capsys, "homology", "--input", "x.json", "--degree-range", "3..1")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    code, out = run(capsys, "snc", "--input", str(FIXTURES / "does_not_exist.json"))
    assert code == 1 and "cannot read" in out


def test_internal_error(capsys, monkeypatch):
    def boom(pr, args):
        raise RuntimeError("kaboom")
    monkeypatch.setitem(cli.COMMANDS, "snc", boom)
    code, out = run(capsys, "snc", "--input", str(FIXTURES / "triangle.json"))
    report = json.loads(out)
    assert code == 2 and report["status"] == "error" and "kaboom" in report["diagnostics"][0]


@pytest.mark.parametrize("name", ["twisted_two_slot.json", "complex_rp2.json"])
def test_check_triangles(capsys, name):
    code, out = run(capsys, "check-triangles", "--input", str(FIXTURES / name))
    res = json.loads(out)["results"]
    assert code == 0
    assert set(res["triangles"].values()) == {"exact"}
    assert set(res["vanishing"].values()) == {"ok"}
    assert all(res["cone_of_delta"].values())


def test_ks(capsys):
    code, out = run(capsys, "ks", "--input", str(FIXTURES / "ks_z5_times6.json"))
    res = json.loads(out)["results"]
    assert code == 0 and res["ar"] == {"0": [5], "1": [5]} and res["cone_triangle"] == "exact"


def test_blowup(capsys):
    code, out = run(capsys, "blowup", "--input", str(FIXTURES / "blowup_triangle.json"))
    res = json.loads(out)["results"]
    assert res["weight_homology"] == {"0": [], "1": [0, 0], "2": [0]}
    assert res["notes"] == {"0": "out of formula range"}
