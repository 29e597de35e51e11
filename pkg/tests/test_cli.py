import csv
import io
import json
import subprocess
import sys

import pytest

from repconst.cli import EXIT_BUDGET, run
from repconst.mstructure import Certificate
from repconst.repfn import SetPrefix


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cyclotomic_compact(capsys):
    assert call(capsys, "cyclotomic", "6") == (0, "[1,-1,1]\n", "")


def test_cyclotomic_multiplicity(capsys, tmp_path):
    f = tmp_path / "p.json"
    f.write_text('["1", "2", "2", "1"]')  # (1+z)(1+z+z^2)
    code, out, _ = call(capsys, "cyclotomic", "--multiplicity", "3", str(f))
    assert code == 0
    assert json.loads(out) == {"n": 3, "s": 1, "residual": [1, 1]}


def test_repfn_csv_and_json(capsys, tmp_path):
    f = tmp_path / "a.json"
    f.write_text(SetPrefix((0, 1, 4, 5), 5).to_json())
    code, out, _ = call(capsys, "repfn", "--set", str(f), "--ks", "1,2", "--upto", "6")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [int(r["count"]) for r in rows[:6]] == [1] * 6
    assert rows[6]["determined"] == "0"
    code, out, _ = call(capsys, "repfn", "--set", str(f), "--ks", "1,2", "--upto", "3", "--format", "json")
    assert json.loads(out)[3] == {"n": 3, "count": 1, "determined": True}


def test_moser_round_trip(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("REPCONST_OUT_DIR", str(tmp_path))
    code, out, _ = call(capsys, "moser", "--k", "2", "--upto", "21", "--verify", "--out", "m.json")
    assert code == 0
    res = json.loads(out)
    assert res["members"] == [0, 1, 4, 5, 16, 17, 20, 21]
    assert res["verify"]["status"] == "holds-on-horizon"
    saved = SetPrefix.from_json((tmp_path / "m.json").read_text())
    assert saved == SetPrefix(tuple(res["members"]), 21)


def test_solve(capsys):
    code, out, _ = call(capsys, "solve", "--ks", "2,3", "--box", "1,1")
    assert code == 0
    assert json.loads(out)["conflict"]["at"] == [1, 1]
    code, out, _ = call(capsys, "solve", "--ks", "2,3", "--box", "1,1", "--s", "1,1=1")
    assert "conflict" not in json.loads(out)


def test_certify_then_verify(capsys, tmp_path):
    path = tmp_path / "cert.json"
    code, out, _ = call(capsys, "certify", "--ks", "2,3", "--t", "1,1", "--out", str(path))
    assert code == 0
    assert json.loads(out)["target"] == [1, 0]
    assert Certificate.from_json(path.read_text()).to_dict() == json.loads(out)
    assert call(capsys, "verify", str(path))[:2] == (0, "VALID\n")
    data = json.loads(path.read_text())
    data["steps"][0]["coeff_num"] += 1
    path.write_text(json.dumps(data))
    code, out, _ = call(capsys, "verify", str(path))
    assert code == 1 and out.startswith("INVALID")


def test_certify_rejects_non_theorem_form(capsys):
    code, _, err = call(capsys, "certify", "--ks", "2,4", "--t", "1")
    assert code == 1 and "not of theorem form" in err


def test_search_checkpoint_resume(capsys, tmp_path):
    ck = tmp_path / "ck.json"
    code, out, _ = call(
        capsys, "search", "--ks", "1,2", "--c", "1", "--upto", "12", "--budget", "5", "--report-all", "--checkpoint", str(ck)
    )
    assert code == EXIT_BUDGET and json.loads(out)["status"] == "budget-exceeded"
    code, out, _ = call(capsys, "search", "--resume", str(ck), "--budget", "1e6")
    res = json.loads(out)
    assert code == 0 and res["status"] == "survivors-found"
    assert res["survivors"] == [{"members": [0, 1, 4, 5], "decided_bound": 12}]


def test_demo(capsys):
    code, out, _ = call(capsys, "demo", "--ks", "2,3", "--search-upto", "15", "--search-n0", "3")
    rep = json.loads(out)
    assert code == 0 and rep["confirmed"]
    assert rep["certificate"]["verified"] and rep["solver"]["at"] == [1, 1]


def test_demo_rejects_2_4(capsys):
    code, _, err = call(capsys, "demo", "--ks", "2,4")
    assert code != 0 and "not of theorem form" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["nonsense"])
    assert exc.value.code != 0
    with pytest.raises(SystemExit) as exc:
        run(["certify", "--ks", "2,x", "--t", "1,1"])
    assert exc.value.code != 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "repconst", "cyclotomic", "105"], capture_output=True, text=True)
    assert proc.returncode == 0 and -2 in json.loads(proc.stdout)
