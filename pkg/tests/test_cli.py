import json

import pytest

from rhogroups.cli import main


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_compute(capsys):
    status, out, _ = run(capsys, "compute", "C(6)")
    assert status == 0
    assert "rho = 2^3 * 3^4" in out and "psi = 21" in out and "omega = {1, 2, 3, 6}" in out


def test_compute_json(capsys):
    status, out, _ = run(capsys, "compute", "S(3)", "--format", "json")
    assert status == 0 and json.loads(out)["rho"] == "2^3 * 3^2"


def test_classify_s4(capsys):
    status, out, _ = run(capsys, "classify", "S(4)")
    assert status == 0
    for flag in ("cyclic", "nilpotent", "supersoluble", "sylow_tower", "metacyclic_paper"):
        assert f"{flag} = false" in out


def test_classify_frobenius_json(capsys):
    status, out, _ = run(capsys, "classify", "Frob(7,3)", "--format", "json")
    data = json.loads(out)
    assert status == 0 and data["frobenius_structure"] == {"kernel_order": 7, "complement_order": 3}


def test_usage_errors_exit_2(capsys, tmp_path):
    assert run(capsys, "compute", "X(3)")[0] == 2
    assert run(capsys, "compute", "C(600)")[0] == 2
    assert run(capsys, "verify", "--corpus", str(tmp_path / "missing.txt"))[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("a: C(2)\na: C(3)\n")
    status, _, err = run(capsys, "verify", "--corpus", str(bad))
    assert status == 2 and "duplicate" in err
    assert run(capsys, "abelian", "--n-max", "600")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify"])
    assert exc.value.code == 2


def test_verify_file_and_formats(capsys, tmp_path):
    corpus = tmp_path / "c.txt"
    corpus.write_text("s3: S(3)\nk: Ab(2,2)\n")
    out = tmp_path / "r.csv"
    status, _, err = run(capsys, "verify", "--corpus", str(corpus), "--format", "csv", "--out", str(out))
    assert status == 0 and "MAIN_THM" in err
    assert out.read_text().startswith("label,tag,applicable")
    status, text, _ = run(capsys, "verify", "--corpus", str(corpus), "--tags", "MAIN_THM")
    assert {r["tag"] for r in json.loads(text)["rows"]} == {"MAIN_THM"}


def test_verify_failure_exit_1(capsys, tmp_path):
    corpus = tmp_path / "c.txt"
    corpus.write_text("big: C(100)\n")
    assert run(capsys, "verify", "--corpus", str(corpus), "--cap", "50")[0] == 1


def test_remarks_and_abelian_and_table(capsys):
    status, out, _ = run(capsys, "remarks", "--p-max", "13", "--alpha-max", "3")
    assert status == 0 and json.loads(out)["summary"]["REMARK_P"]["violations"] == 0
    status, out, _ = run(capsys, "abelian", "--n-max", "16", "--format", "csv")
    assert status == 0 and out.count("\r\n") == 17
    status, out, _ = run(capsys, "table", "--n-max", "10")
    lines = out.splitlines()
    assert status == 0 and lines[4] == "4\t2^5\t2^5\ttrue" and len(lines) == 11
