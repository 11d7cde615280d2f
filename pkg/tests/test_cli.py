import json
import subprocess
import sys

import pytest

from macdo.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def strip_seconds(report):
    for case in report.get("cases", []):
        case.pop("seconds", None)
    return report


def test_compute_P(capsys):
    code, out = run(capsys, "compute", "P", "--n", "3", "--lambda", "0,0,2")
    assert code == 0
    assert out.strip() == "m[0,0,2] + ((1+q)*(1-t)/(1-q*t))*m[0,1,1]"


def test_compute_phi_trivial(capsys):
    code, out = run(capsys, "compute", "phi", "--n", "3", "--lambda", "0,0,0")
    assert code == 0 and out.strip() == "1"


def test_compute_eigen_json(capsys):
    code, out = run(capsys, "compute", "eigen", "--n", "3", "--lambda", "0,0,2", "--json")
    js = json.loads(out)
    assert [t["key"] for t in js["terms"]] == ["h1", "h2", "h3"]
    assert js["terms"][2]["coeff"] == "q^2"
    assert json.dumps(js, sort_keys=True) == out.strip()


def test_compute_chi(capsys):
    code, out = run(capsys, "compute", "chi", "--lambda", "0,1,1")
    assert code == 0 and out.splitlines() == ["chi_0 = 1", "chi_1 = t^-2*(1+t)"]


def test_compute_json_round_trip(capsys):
    _, out = run(capsys, "compute", "P", "--lambda", "0,1,2", "--json")
    assert json.dumps(json.loads(out), sort_keys=True) == out.strip()


def test_eval(capsys):
    code, out = run(capsys, "eval", "P", "--lambda", "0,1", "--at", "1,2", "--q", "0.2", "--t", "0.5")
    assert code == 0 and float(out) == 3.0


@pytest.mark.parametrize("argv", [
    ["compute", "P", "--lambda", "0,2,1"],
    ["compute", "P", "--lambda", "x"],
    ["compute", "Q", "--lambda", "0,1"],
    ["verify", "nosuch"],
    ["eval", "P", "--lambda", "0,1", "--at", "1,z"],
])
def test_flag_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
    assert "usage:" in capsys.readouterr().err


def test_n_mismatch():
    with pytest.raises(SystemExit) as exc:
        main(["compute", "P", "--n", "2", "--lambda", "0,0,1"])
    assert exc.value.code != 0


def test_verify_sepeq(capsys):
    code, out = run(capsys, "verify", "sepeq", "--n", "3", "--max-part", "3")
    assert code == 0
    assert out.strip().endswith("20/20 cases passed")


def test_verify_integer_g(capsys):
    code, out = run(capsys, "verify", "integer-g", "--g", "1", "--lambda", "0,0,2")
    assert code == 0 and out.startswith("PASS")


def test_verify_aw_deterministic(capsys):
    argv = ["verify", "aw", "--q", "0.4", "--draws", "25", "--seed", "7", "--json"]
    code, first = run(capsys, *argv)
    assert code == 0
    _, second = run(capsys, *argv)
    a, b = json.loads(first), json.loads(second)
    assert a["ok"] and len(a["cases"]) == 25
    assert all(c["detail"]["rel_err"] < 1e-9 for c in a["cases"])
    assert strip_seconds(a) == strip_seconds(b)
    # byte-identical re-serialisation
    assert json.dumps(json.loads(first), sort_keys=True) == first.strip()


def test_numeric_case_metadata(capsys):
    _, out = run(capsys, "verify", "thm1", "--json")
    for case in json.loads(out)["cases"]:
        assert {"points", "trunc", "tol"} <= set(case["detail"])


def test_regime_violation_is_case_error(capsys):
    code, out = run(capsys, "verify", "thm1", "--at", "0.9,0.9", "--json")
    assert code == 1
    report = json.loads(out)
    assert {c["status"] for c in report["cases"]} == {"error"}
    assert "ContourError" in report["cases"][0]["detail"]["error"]


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("MACDO_THREADS", "1")
    code, single = run(capsys, "verify", "phi-consistency", "--max-part", "2", "--json")
    monkeypatch.setenv("MACDO_THREADS", "4")
    _, multi = run(capsys, "verify", "phi-consistency", "--max-part", "2", "--json")
    assert code == 0
    assert strip_seconds(json.loads(single)) == strip_seconds(json.loads(multi))


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "macdo.cli", "compute", "phi", "--lambda", "0,0,1"],
                         capture_output=True, text=True, check=True)
    assert "y" in out.stdout


def _parsed(js):
    from macdo.exact import RatFunc
    return {str(t["key"]): RatFunc.parse(t["coeff"]) for t in js["terms"]}


@pytest.mark.parametrize("kind,fixture", [("P", "p_table"), ("phi", "phi_table")])
def test_compute_json_matches_golden(kind, fixture, request, capsys):
    for entry in request.getfixturevalue(fixture):
        lam = ",".join(map(str, entry["lambda"]))
        _, out = run(capsys, "compute", kind, "--lambda", lam, "--json")
        js = json.loads(out)
        assert {k: js[k] for k in ("object", "n", "lambda", "basis")} == \
            {k: entry[k] for k in ("object", "n", "lambda", "basis")}
        assert _parsed(js) == _parsed(entry)
