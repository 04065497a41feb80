from __future__ import annotations

import json

import pytest

from floercone.cli import run
from floercone.io import bundle_to_json, complex_from_json, complex_to_json, load_example


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_surgery_json(capsys):
    code, out, _ = call(capsys, "surgery", "--bundle", "trefoil", "--k", "-1")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "surgery.v1"
    (cone,) = doc["cones"]
    assert cone["spinc"] == "0:0/1" and len(cone["reduced"]["basis"]) == 5
    # reduced complex reloads bit-identically
    red = complex_from_json(cone["reduced"])
    assert complex_to_json(red) == cone["reduced"]


def test_output_is_deterministic(capsys):
    first = call(capsys, "hfk", "--bundle", "figure_eight", "--k", "3")[1]
    second = call(capsys, "hfk", "--bundle", "figure_eight", "--k", "3")[1]
    assert first == second
    spincs = [r["spinc"] for r in json.loads(first)["rows"]]
    assert spincs == sorted(spincs)


def test_text_tables(capsys):
    code, out, _ = call(capsys, "hfk", "--bundle", "trefoil", "--k", "5", "--format", "text")
    assert code == 0
    assert out.splitlines()[0].split() == ["spinc", "A", "gr", "rank"]
    assert len(out.splitlines()) == 6
    code, out, _ = call(capsys, "dualcfk", "--bundle", "trefoil", "--k", "1", "--format", "text")
    assert code == 0 and "# sector 0:0/1" in out


def test_spinc_selection(capsys):
    code, out, _ = call(capsys, "surgery", "--bundle", "unknot", "--k", "3", "--spinc", "0:1/1")
    assert code == 0 and [c["spinc"] for c in json.loads(out)["cones"]] == ["0:1/1"]
    code, _, err = call(capsys, "surgery", "--bundle", "unknot", "--k", "3", "--spinc", "0:7/1")
    assert code == 64 and "choices" in err


def test_explicit_range_and_ucap(capsys):
    code, out, _ = call(capsys, "surgery", "--bundle", "trefoil", "--k", "-1", "--a", "-3", "--b", "2", "--uCap", "6")
    assert code == 0
    cone = json.loads(out)["cones"][0]
    assert (cone["a"], cone["b"]) == (-3, 2) and len(cone["reduced"]["basis"]) == 5
    assert call(capsys, "surgery", "--bundle", "trefoil", "--k", "-1", "--a", "-3")[0] == 64


def test_rational_surgery(capsys):
    code, out, _ = call(capsys, "rational-surgery", "--bundle", "trefoil", "--n", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["ratl_check"]["ok"] and doc["ratl_check"]["mismatches"] == []
    assert sum(r["rank"] for r in doc["cones"][0]["hf"]) == 3
    assert call(capsys, "rational-surgery", "--bundle", "trefoil", "--n", "0")[0] == 2


def test_grade_diagram(capsys):
    code, out, _ = call(capsys, "grade-diagram", "--diagram", "trefoil_p5")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert {r["generator"]: r["A"] for r in rows if r["spinc"] == "alpha-beta"} == {"ax": "-1/1", "bx": "0/1",
                                                                                   "cx": "1/1"}


def test_reduce_command(tmp_path, capsys):
    sec = load_example("figure_eight").sectors[0]
    path = tmp_path / "fig8.json"
    path.write_text(json.dumps(complex_to_json(sec)))
    code, out, _ = call(capsys, "reduce", "--complex", str(path))
    assert code == 0 and len(json.loads(out)["basis"]) == 5


def test_validate_exit_codes(tmp_path, capsys):
    assert call(capsys, "validate", "--bundle", "trefoil")[0] == 0
    doc = bundle_to_json(load_example("trefoil"))
    doc["flips"][0]["entries"] = doc["flips"][0]["entries"][:1]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = call(capsys, "validate", "--bundle", str(bad))
    assert code == 2 and json.loads(out)["violations"]
    assert call(capsys, "surgery", "--bundle", str(bad), "--k", "1")[0] == 2


def test_zero_framing(capsys):
    assert call(capsys, "surgery", "--bundle", "trefoil", "--k", "0")[0] == 2


def test_io_errors(tmp_path, capsys):
    assert call(capsys, "surgery", "--bundle", str(tmp_path / "missing.json"), "--k", "1")[0] == 1
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert call(capsys, "surgery", "--bundle", str(junk), "--k", "1")[0] == 1


def test_usage_errors(capsys):
    assert call(capsys, "surgery", "--bundle", "trefoil", "--bogus")[0] == 64
    assert call(capsys)[0] == 64
    code, _, err = call(capsys, "surgery", "--bundle", "trefoil")     # bundle carries no framing
    assert code == 64 and "--k" in err


def test_selftest(capsys):
    code, out, _ = call(capsys, "selftest")
    assert code == 0 and out.count("PASS") == 4
