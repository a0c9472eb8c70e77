import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from contract_lab import cli
from contract_lab.config import ScenarioConfig, builtin_configs, load_config
from contract_lab.errors import ConfigError

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def test_shipped_configs_match_builtins():
    shipped = {p.stem: json.loads(p.read_text()) for p in CONFIGS.glob("*.json")}
    assert shipped == builtin_configs()
    for stem in shipped:
        cfg = load_config(CONFIGS / f"{stem}.json")
        assert ScenarioConfig.from_dict(cfg.to_dict()) == cfg


def test_solve_uniform_json(capsys):
    code, out, err = run(["solve", "--config", CONFIGS / "uniform-3.6.1.json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == "1" and doc["kind"] == "solve"
    con, rev = doc["equilibria"]
    assert con["regime"] == "concealed" and con["p0"] == pytest.approx(0.625, abs=1e-10)
    assert rev["p0"] == pytest.approx(0.75, abs=1e-10) and rev["p1"] == pytest.approx(0.5, abs=1e-10)
    assert rev["welfare"] == pytest.approx(0.234375, abs=1e-12)
    assert doc["reports"][0]["name"] == "quantity_lemma" and doc["reports"][0]["holds"]
    assert "quantity lemma audit: pass" in err


def test_solve_csv_crlf(tmp_path, capsys):
    out = tmp_path / "sub" / "solve.csv"
    code, stdout, _ = run(["solve", "--config", CONFIGS / "uniform-3.6.1.json", "--format", "csv", "--out", out], capsys)
    assert code == 0 and stdout == ""
    raw = out.read_bytes()
    assert raw.count(b"\r\n") == 3
    rows = list(csv.reader(io.StringIO(raw.decode())))
    assert rows[0] == cli.EQUILIBRIUM_HEADER
    assert float(rows[1][cli.EQUILIBRIUM_HEADER.index("agent_utility")]) == pytest.approx(0.1015625, abs=1e-12)


def test_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cfg = CONFIGS / "fig6-trajectories.json"
    assert run(["sweep", "garbling", "--config", cfg, "--out", a], capsys)[0] == 0
    assert run(["sweep", "garbling", "--config", cfg, "--out", b], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_sweep_restriction_two_points(tmp_path, capsys):
    doc = builtin_configs()["fig6-trajectories"]
    doc["grids"] = {"r_n": 2}
    code, out, err = run(["sweep", "restriction", "--config", write(tmp_path, doc)], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == cli.RESTRICTION_HEADER and len(rows) == 3
    assert "r*=0.0 (boundary)" in err


def test_sweep_garbling_summary(capsys):
    code, _, err = run(["sweep", "garbling", "--config", CONFIGS / "fig6-trajectories.json"], capsys)
    assert code == 0 and "(interior)" in err


def test_grid_single_cell(tmp_path, capsys):
    doc = builtin_configs()["fig2-grid"]
    doc["grids"] = {"lambda0": [0.95], "lambda1": [0.05]}
    code, out, err = run(["grid", "revelation", "--config", write(tmp_path, doc)], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == cli.REVELATION_HEADER and len(rows) == 2
    assert float(rows[1][2]) == pytest.approx(0.018243829876800843, abs=1e-9)
    assert "0 sign change(s)" in err


def test_grid_garbling_prime_json(tmp_path, capsys):
    doc = builtin_configs()["fig5-grid"]
    doc["grids"] = {"lambda0": [0.9], "lambda1": [0.8]}
    code, out, _ = run(["grid", "garbling_prime", "--config", write(tmp_path, doc), "--format", "json"], capsys)
    assert code == 0
    rec = json.loads(out)["records"][0]
    assert list(rec) == cli.GARBLING_PRIME_HEADER
    assert rec["vgarb_prime_at_one"] == pytest.approx(1.1854366863128796e-05, abs=2e-8)


def test_check_conditions(capsys):
    code, out, err = run(["check-conditions", "--config", CONFIGS / "anchored-exponential.json"], capsys)
    assert code == 0
    reports = {r["name"]: r for r in json.loads(out)["reports"]}
    assert reports["prop1_zero_cost_concealment"]["holds"]
    assert reports["garbling_zerocost"]["margin"] == pytest.approx(0.028294, abs=1e-6)
    assert "prop1_zero_cost_concealment" in err and "holds" in err


def test_verify_exits_zero(capsys):
    code, out, _ = run(["verify"], capsys)
    assert code == 0
    assert "FAIL" not in out
    assert out.strip().splitlines()[-1].endswith("invariants passed")


@pytest.mark.parametrize(
    "doc",
    [
        {"b": 1.0, "theta": 1.5},
        {"b": -1.0, "theta": 0.5},
        {"b": 1.0, "theta": 0.5, "extra": 1},
        {"b": 1.0, "theta": 0.5, "f0": {"family": "exponential", "mean": 0.2}},
        {"b": 1.0, "theta": 0.5, "f0": {"family": "nope"}, "f1": {"family": "nope"}},
        {"b": 1.0, "theta": 0.5, "grids": {"eps_n": 1}},
        {"b": 1.0, "theta": 0.5, "output": {"format": "xml"}},
    ],
)
def test_bad_configs_exit_2(tmp_path, capsys, doc):
    code, out, err = run(["solve", "--config", write(tmp_path, doc)], capsys)
    assert code == 2 and out == "" and "config error" in err


def test_missing_and_malformed_config(tmp_path, capsys):
    assert run(["solve", "--config", tmp_path / "none.json"], capsys)[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(["solve", "--config", bad], capsys)[0] == 2


def test_theta_message(tmp_path, capsys):
    _, _, err = run(["solve", "--config", write(tmp_path, {"b": 1.0, "theta": 0.0})], capsys)
    assert "theta must lie in (0,1)" in err


def test_usage_errors(capsys):
    assert run(["verify", "--seedless"], capsys)[0] == 2
    assert run(["solve", "--config", CONFIGS / "uniform-3.6.1.json", "--grid-n", "2"], capsys)[0] == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["bogus"])
    assert exc.value.code == 2


def test_grid_without_lambdas(capsys):
    assert run(["grid", "revelation", "--config", CONFIGS / "uniform-3.6.1.json"], capsys)[0] == 2


def test_numerical_failure_exit_3(monkeypatch, capsys):
    import contract_lab.contract as contract
    from contract_lab.errors import NonConvergence

    def boom(s):
        raise NonConvergence("forced")

    monkeypatch.setattr(contract, "solve_concealed", boom)
    code, out, err = run(["solve", "--config", CONFIGS / "uniform-3.6.1.json"], capsys)
    assert code == 3 and out == ""
    assert "NonConvergence: forced" in err


def test_json_has_no_nan():
    text = cli.render_json("x", {"v": float("nan")})
    assert json.loads(text)["v"] is None


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "contract_lab.cli", "solve", "--config", str(CONFIGS / "uniform-3.6.1.json"), "--format", "csv"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith(",".join(cli.EQUILIBRIUM_HEADER))


def test_load_config_errors_are_value_errors(tmp_path):
    with pytest.raises(ValueError):
        load_config(write(tmp_path, {"b": 1.0}))
    assert issubclass(ConfigError, ValueError)


def test_worker_count_does_not_change_output(tmp_path, capsys, monkeypatch):
    doc = builtin_configs()["fig2-grid"]
    doc["grids"] = {"lambda0": [0.1, 0.6], "lambda1": [0.05, 0.9]}
    cfg = write(tmp_path, doc)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["grid", "revelation", "--config", cfg, "--out", a], capsys)[0] == 0
    monkeypatch.setenv("CONTRACT_LAB_THREADS", "2")
    assert run(["grid", "revelation", "--config", cfg, "--out", b], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
