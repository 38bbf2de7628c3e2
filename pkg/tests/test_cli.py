import io
import json
import subprocess
import sys

import pytest

from qma.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def jcall(*argv):
    code, out, err = call(*argv, "--json")
    return code, json.loads(out) if out else None, err


def write_json(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


Q22 = {"family": "dd-verma", "m": 2, "p": 2, "params": {"lambda1": "1", "lambda2": "1"}}
N1 = {"family": "dd-n1", "m": 3, "params": {"alpha": "1", "beta": "1", "lambda1": "1", "lambda2": "1"}}
N1_SHIFT = {"family": "dd-n1", "m": 3, "params": {"alpha": "1", "beta": "1", "lambda1": "q", "lambda2": "q"}}
N1_ALPHA = {"family": "dd-n1", "m": 3, "params": {"alpha": "q", "beta": "1", "lambda1": "1", "lambda2": "1"}}


def test_normalize_example():
    code, out, _ = call("normalize", "--algebra", "dd2", "--m", "3", "-e", "Z22*Z11")
    assert code == 0
    assert out.strip() == "Z11*Z22 + (q - 1) Z12*Z21"


def test_pideg_example():
    code, data, _ = jcall("pideg", "--dd-n", "2", "--m", "5")
    assert code == 0 and data["result"] == 25 and data["command"] == "pideg"


def test_pideg_matrix(tmp_path):
    path = tmp_path / "h.txt"
    path.write_text("2 2\n0 1\n-1 0\n")
    code, data, _ = jcall("pideg", "--matrix", str(path), "--m", "5")
    assert code == 0 and data["result"] == 5 and data["image_cardinality"] == 25


def test_pideg_usage():
    assert call("pideg", "--m", "5")[0] == 2
    assert call("pideg", "--dd-n", "2")[0] == 2


def test_central_exit_codes():
    assert call("central", "--m", "3", "-e", "Z12^3")[0] == 0
    code, data, _ = jcall("central", "--m", "3", "-e", "Z12^2")
    assert code == 1 and data["result"] is False and "witness" in data
    assert call("central", "--algebra", "rea2", "--m", "5", "-e", "u11 + q^-2*u22")[0] == 0


def test_qnormal():
    code, data, _ = jcall("qnormal", "--m", "4", "-e", "Z11*Z22 - Z12*Z21")
    assert code == 0 and data["result"] == {"Z11": 0, "Z12": 1, "Z21": 3, "Z22": 0}
    assert call("qnormal", "--m", "4", "-e", "Z11 + Z22")[0] == 1


def test_identity():
    code, data, _ = jcall("identity", "--family", "dd", "--index", "i", "--max-r", "4", "--m", "5")
    assert code == 0 and data["result"] is True and len(data["per_r"]) == 4
    code, data, _ = jcall("identity", "--family", "rea", "--index", "iii", "--max-r", "3", "--m", "3")
    assert code == 1 and data["witness"] == {"first_failing_r": 2}
    code, _, _ = call("identity", "--family", "rea", "--index", "iii", "--max-r", "3", "--m", "3", "--corrected")
    assert code == 0
    assert call("identity", "--family", "dd", "--index", "iv", "--max-r", "3", "--m", "3")[0] == 2


def test_identity_jobs_same_output():
    base = ["identity", "--family", "rea", "--index", "iv", "--max-r", "4", "--m", "5", "--json"]
    assert call(*base)[1] == call(*base, "--jobs", "2")[1]


def test_confluence(tmp_path):
    assert call("confluence", "--m", "4")[0] == 0
    assert call("confluence", "--algebra", "rea2", "--m", "6")[0] == 0
    path = tmp_path / "toy.txt"
    path.write_text("field cyclotomic m=3\ngenerators x < y < z\nrule y*x -> x\nrule z*y -> y\n")
    code, data, _ = jcall("confluence", "--algebra", str(path))
    assert code == 1 and data["witness"][0]["word"] == "z*y*x"


def test_usage_errors():
    assert call("normalize", "-e", "Z11")[0] == 2  # missing --m
    assert call("normalize", "--m", "3", "-e", "Z99")[0] == 2
    assert call("normalize", "--m", "3", "-e", "Z11 +")[0] == 2
    assert call("normalize", "--m", "1", "-e", "Z11")[0] == 2
    assert call("normalize", "--m", "3", "--field", "prime", "-e", "Z11")[0] == 2
    assert call("nosuch")[0] == 2
    code, _, err = call("normalize", "--m", "3", "-e", "Z11 )")
    assert code == 2 and "position" in err


def test_step_cap_exit_code(monkeypatch, tmp_path):
    monkeypatch.setenv("QMA_STEP_CAP", "3")
    path = tmp_path / "dd.txt"
    path.write_text(
        "field cyclotomic m=3\ngenerators Z11 < Z12 < Z21 < Z22\n"
        "rule Z12*Z11 -> Z11*Z12\nrule Z21*Z11 -> q Z11*Z21\nrule Z21*Z12 -> q Z12*Z21\n"
        "rule Z22*Z11 -> Z11*Z22 + (q - 1) Z12*Z21\nrule Z22*Z12 -> q Z12*Z22\nrule Z22*Z21 -> Z21*Z22\n"
    )
    assert call("normalize", "--algebra", str(path), "-e", "Z22^3*Z11^3")[0] == 3


def test_prime_field_flags():
    code, out, _ = call("normalize", "--m", "3", "--field", "prime", "--p", "7", "-e", "Z22*Z11")
    assert code == 0 and out.strip() == "Z11*Z22 + Z12*Z21"


def test_module_build_verify_analyze(tmp_path):
    params = write_json(tmp_path, "q22.json", Q22)
    out = str(tmp_path / "q22_mod.json")
    assert call("module-build", "--params", params, "--out", out)[0] == 0
    assert call("module-verify", "--in", out)[0] == 0
    code, data, _ = jcall("module-analyze", "--params", params)
    res = data["result"]
    assert code == 0
    assert res["simple"] is False and res["semisimple"] is False and res["indecomposable"] is True
    assert res["commutant_dim"] == 2 and res["radical_dim"] == 1
    assert jcall("module-analyze", "--in", out)[1]["result"] == res
    assert call("module-analyze", "--in", out, "--params", params)[0] == 2


def test_module_verify_detects_corruption(tmp_path):
    params = write_json(tmp_path, "n1.json", N1)
    code, data, _ = jcall("module-build", "--params", params)
    mod = data["representation"]
    mod["matrices"]["Z22"][0][0] = "7"
    path = write_json(tmp_path, "bad.json", mod)
    code, data, _ = jcall("module-verify", "--in", path)
    assert code == 1 and data["result"]["violations"]


def test_module_iso(tmp_path):
    a = write_json(tmp_path, "a.json", N1)
    b = write_json(tmp_path, "b.json", N1_SHIFT)
    c = write_json(tmp_path, "c.json", N1_ALPHA)
    code, data, _ = jcall("module-iso", "--a", a, "--b", b)
    assert code == 0 and data["result"]["isomorphic"] and data["result"]["parameter_criterion"]
    code, data, _ = jcall("module-iso", "--a", a, "--b", c)
    assert code == 1 and not data["result"]["isomorphic"] and not data["result"]["parameter_criterion"]


def test_module_bad_files(tmp_path):
    assert call("module-verify", "--in", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert call("module-verify", "--in", str(bad))[0] == 2
    zero = write_json(tmp_path, "z.json", {"family": "dd-n1", "m": 3, "params": {**N1["params"], "alpha": "0"}})
    assert call("module-build", "--params", zero)[0] == 2
    flt = write_json(tmp_path, "f.json", {"family": "dd-n1", "m": 3, "params": {**N1["params"], "alpha": "1.5"}})
    assert call("module-build", "--params", flt)[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ("normalize", "--m", "4", "-e", "Z22 Z21 Z12 Z11"),
        ("qnormal", "--algebra", "rea2", "--m", "5", "-e", "u22"),
        ("identity", "--family", "rea", "--index", "ii", "--max-r", "3", "--m", "4"),
        ("pideg", "--dd-n", "3", "--m", "2"),
        ("confluence", "--algebra", "rea2", "--m", "3"),
    ],
)
def test_json_roundtrip_and_determinism(argv):
    code1, out1, _ = call(*argv, "--json", "--seed", "5")
    code2, out2, _ = call(*argv, "--json", "--seed", "5")
    assert out1 == out2 and code1 == code2
    data = json.loads(out1)
    assert set(data) >= {"command", "inputs", "result"}
    assert json.dumps(data, sort_keys=True) + "\n" == out1


def test_module_json_determinism(tmp_path):
    a = write_json(tmp_path, "a.json", N1)
    b = write_json(tmp_path, "b.json", N1_SHIFT)
    outs = {call("module-iso", "--a", a, "--b", b, "--json", "--seed", "3")[1] for _ in range(2)}
    assert len(outs) == 1


def test_console_script_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "qma.cli", "pideg", "--dd-n", "2", "--m", "3"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "9"
