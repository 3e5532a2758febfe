import json
import subprocess
import sys

import pytest

from lsum.cli import main
from lsum.render import dumps


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_identity_latex_harmonic_cube(capsys):
    code, out, _ = run(capsys, "identity", "--expr", "1/(a*b*c)", "--t", "3", "--format", "latex")
    assert code == 0
    assert "H_{n}^{3}" in out and out.startswith("\\documentclass")


def test_identity_generic_f(capsys):
    code, out, _ = run(capsys, "identity", "--expr", "f(a)", "--t", "3")
    assert code == 0 and "n^2*F(n)" in out


def test_identity_unused_index(capsys):
    code, out, _ = run(capsys, "identity", "--expr", "a+b")
    assert code == 0 and "index c does not appear" in out and "a,b,c" in out


def test_identity_json(capsys):
    code, out, _ = run(capsys, "identity", "--expr", "ln(a)", "--format", "json")
    assert code == 0
    body = json.loads(out)
    assert body["command"] == "identity" and "ln Gamma" in body["identity"]["closed_form"]


def test_verify_exit_codes(capsys):
    assert run(capsys, "verify", "--expr", "ln(a)", "--t", "3", "--n", "30", "--backend", "formal")[0] == 0
    assert run(capsys, "verify", "--expr", "1/(a*b*c)", "--t", "3", "--n", "25", "--method", "symmetric")[0] == 0
    code, _, err = run(capsys, "verify", "--expr", "tan(a)", "--backend", "exact")
    assert code == 2 and "formal" in err
    assert run(capsys, "verify", "--expr", "ln(a)", "--backend", "formal", "--method", "symmetric")[0] == 2
    assert run(capsys, "verify", "--expr", "a*b", "--t", "2", "--method", "general")[0] == 2
    assert run(capsys, "verify", "--expr", "a", "--n", "0")[0] == 2


def test_verify_parse_error_reports_offset(capsys):
    code, _, err = run(capsys, "verify", "--expr", "1/(a*b")
    assert code == 2 and "offset 6" in err
    code, _, err = run(capsys, "identity", "--expr", "a # b")
    assert code == 2 and "offset 2" in err


def test_verify_json_schema(capsys):
    code, out, _ = run(capsys, "verify", "--expr", "(a*b)^(-s)", "--t", "2", "--s", "2", "--n", "4", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert set(data) == {"tool_version", "command", "config", "entries"}
    entry = data["entries"][0]
    assert {"id", "n_max", "status", "first_fail_n", "residual", "wall_ms"} <= set(entry)
    assert entry["l_elements"][0] == "1/1" and entry["status"] == "pass"


def test_verify_float_s(capsys):
    code, out, _ = run(capsys, "verify", "--expr", "(a*b*c)^(-s)", "--s", "1.5", "--backend", "float", "--n", "8")
    assert code == 0 and "result: pass" in out
    assert run(capsys, "verify", "--expr", "(a*b*c)^(-s)", "--s", "1.5", "--n", "8")[0] == 2


def test_catalog_json_round_trip(capsys):
    code, out, _ = run(capsys, "catalog", "--run", "all", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert dumps(data) + "\n" == out
    ids = [e["id"] for e in data["entries"]]
    assert ids[0] == "eq4" and ids[-1] == "asympt"
    for e in data["entries"]:
        assert {"id", "n_max", "status", "first_fail_n", "residual", "wall_ms"} <= set(e)
    first = {e["id"]: e for e in data["entries"]}
    assert first["theorem1"]["status"] == "corrected" and first["theorem1"]["first_fail_n"] == 1


def test_catalog_selection(capsys):
    code, out, _ = run(capsys, "catalog", "--run", "theorem1")
    assert code == 0 and "printed form fails at n=1" in out and "corrected form holds" in out
    assert run(capsys, "catalog", "--run", "eq4", "--s", "3", "--n", "100")[0] == 0
    code, _, err = run(capsys, "catalog", "--run", "eq4,bogus")
    assert code == 2 and "bogus" in err


def test_catalog_is_deterministic(capsys):
    def strip(text):
        data = json.loads(text)
        for e in data["entries"]:
            e.pop("wall_ms")
        return data

    a = strip(run(capsys, "catalog", "--run", "eq4,prop-factorial", "--format", "json")[1])
    b = strip(run(capsys, "catalog", "--run", "eq4,prop-factorial", "--format", "json")[1])
    assert a == b


def test_asympt(capsys):
    code, out, _ = run(capsys, "asympt", "--m", "2", "--points", "100,1000,10000")
    rows = [line for line in out.splitlines() if line.strip() and line.split()[0].isdigit()]
    assert code == 0 and len(rows) == 3
    code, out, _ = run(capsys, "asympt", "--m", "1", "--points", "10", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data["entries"]) == 1 and abs(data["entries"][0]["ratio"]) < 1
    with pytest.raises(SystemExit) as info:
        main(["asympt", "--m", "4"])
    assert info.value.code == 2


def test_output_file(tmp_path, capsys):
    target = tmp_path / "report.tex"
    code, out, _ = run(capsys, "identity", "--expr", "a*b", "--t", "2", "--format", "latex", "--output", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("\\documentclass")


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lsum.cli", "verify", "--expr", "a*b", "--t", "2", "--n", "5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "result: pass" in proc.stdout
