import json

import pytest

from hetstab import RspParams, rsp_cycle_spec, save_cycle
from hetstab.cli import main


@pytest.fixture
def rsp_json(tmp_path):
    path = tmp_path / "rsp.json"
    save_cycle(rsp_cycle_spec(RspParams(-0.5, 0.2)), str(path))
    return str(path)


def test_analyze_reports_eas(rsp_json, capsys, tmp_path):
    out_json = tmp_path / "report.json"
    assert main(["analyze", rsp_json, "--json", str(out_json)]) == 0
    out = capsys.readouterr().out
    assert "e.a.s." in out
    assert "0.2666666666666667" in out
    payload = json.loads(out_json.read_text())
    assert payload["report"]["classification"] == "essentially_asymptotically_stable"
    assert payload["version"]
    assert payload["config"]["tol"] == 1e-9


def test_analyze_bad_permutation_exits_one(tmp_path, capsys):
    doc = {
        "nodes": [{"contracting": 1.0, "expanding": 1.0, "transverse": [-0.5]}],
        "connections": [{"permutation": [0, 0]}],
    }
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(doc))
    assert main(["analyze", str(path)]) == 1
    assert "permutation" in capsys.readouterr().err


def test_analyze_indeterminate_exits_two(tmp_path, capsys):
    path = tmp_path / "boundary.json"
    save_cycle(rsp_cycle_spec(RspParams(0.4, -0.4)), str(path))
    assert main(["analyze", str(path)]) == 2
    assert "indeterminate" in capsys.readouterr().err


def test_findex_with_leading_dash_alpha(capsys):
    assert main(["findex", "--alpha", "-1,1,1"]) == 0
    out = capsys.readouterr().out
    assert "F+      = 1.0" in out
    assert "F-      = 0.0" in out
    assert "F^index = 1.0" in out


def test_findex_infinite_values_serialized(capsys):
    assert main(["findex", "--alpha", "1,2,3"]) == 0
    out = capsys.readouterr().out
    assert "F+      = +inf" in out
    assert "F^index = +inf" in out


def test_rsp_subcommand(capsys):
    assert main(["rsp", "--eps-x", "-0.5", "--eps-y", "0.2"]) == 0
    out = capsys.readouterr().out
    assert "consistent: True" in out
    assert "e.a.s." in out


def test_rsp_sweep_csv(tmp_path, capsys):
    out_csv = tmp_path / "sweep.csv"
    assert main(["rsp-sweep", "--grid", "3", "--out", str(out_csv)]) == 0
    lines = out_csv.read_text().strip().splitlines()
    assert lines[0] == "eps_x,eps_y,sigma0,sigma1,classification"
    assert len(lines) == 1 + 9
    assert any("-inf" in line for line in lines[1:])
    assert any("essentially_asymptotically_stable" in line for line in lines[1:])


def test_oracle_sigma_csv_and_determinism(rsp_json, tmp_path, capsys):
    csv_a = tmp_path / "a.csv"
    csv_b = tmp_path / "b.csv"
    args = ["oracle", "sigma", rsp_json, "--node", "0",
            "--eps", "1e-15:1e-18:3", "--samples", "500", "--seed", "9"]
    assert main(args + ["--csv", str(csv_a)]) == 0
    assert main(args + ["--csv", str(csv_b)]) == 0
    assert csv_a.read_bytes() == csv_b.read_bytes()     # byte-identical reruns
    header = csv_a.read_text().splitlines()[0]
    assert header == "level,epsilon,sigma_hat_frac,stderr"


def test_oracle_fplus(capsys):
    assert main(["oracle", "fplus", "--alpha", "-1,1,1",
                 "--levels", "1e-1:1e-3:6", "--samples", "20000", "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert "fplus_hat" in out


def test_missing_file_exits_one(capsys):
    assert main(["analyze", "/no/such/file.json"]) == 1


def test_usage_error_exits_one(capsys):
    assert main(["findex"]) == 1               # --alpha is required
    assert main(["no-such-command"]) == 1
