import json

import pytest

from lanesim import cli
from lanesim.verify import Check

CONFIG = """
[run]
T = 0.1
snapshots = 0.05, 0.1

[grid]
x_min = -1
x_max = 2
dx = 0.02

[velocity]
lane1 = linear:a=1
lane2 = quadratic

[initial]
lane1 = bump_q
lane2 = constant:value=0.5,lo=0,hi=1

[source]
type = nonlocal_forward
kernel = linear_forward
range = 0.1
"""


@pytest.fixture
def config_file(tmp_path):
    p = tmp_path / "demo.ini"
    p.write_text(CONFIG)
    return p


def test_simulate(config_file, tmp_path):
    out = tmp_path / "out" / "demo"
    assert cli.main(["simulate", "--config", str(config_file), "--out", str(out)]) == 0
    assert (out / "snapshot_t0.05.csv").exists() and (out / "run.json").exists()
    assert json.loads((out / "run.json").read_text())["config"]["name"] == "demo"


def test_preset_writes_one_directory_per_run(tmp_path):
    assert cli.main(["--workers", "1", "preset", "--name", "source_kernel_cases",
                     "--out", str(tmp_path)]) == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["a_symmetric_nu0.25", "b_symmetric_nu0.5", "c_forward_nu0.5"]


def test_verify_json(config_file, capsys):
    assert cli.main(["verify", "--config", str(config_file)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert {"check_name", "max_violation", "pass"} <= set(report[0])
    assert all(r["pass"] for r in report if r["enforced"])


def test_verify_failure_exit_code(config_file, monkeypatch, tmp_path):
    monkeypatch.setattr(cli, "verify_config", lambda cfg: [Check("cfl", 0.1, False)])
    report = tmp_path / "r.json"
    assert cli.main(["verify", "--config", str(config_file), "--report", str(report)]) == 1
    assert json.loads(report.read_text())[0]["pass"] is False


def test_bad_config_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.ini"
    p.write_text("[run]\nT = 1\n")
    assert cli.main(["simulate", "--config", str(p), "--out", str(tmp_path / "o")]) == 2
    assert "grid.x_min" in capsys.readouterr().err


def test_table1(tmp_path, capsys):
    code = cli.main(["table1", "--out", str(tmp_path)])
    lines = (tmp_path / "table1.csv").read_text().splitlines()
    assert lines[0] == "nu,kernel,lane,error,published,rel_dev,flagged"
    assert len(lines) == 25
    assert code == (1 if any(l.endswith(",1") for l in lines[1:]) else 0)
    assert "0.0311" in capsys.readouterr().out


def test_unknown_subcommand():
    with pytest.raises(SystemExit):
        cli.main(["plot"])
