import json

import pytest

from clonebench.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_sweep_writes_pinned_csv_header(capsys, tmp_path):
    out = tmp_path / "records.csv"
    code, _, err = run_cli(
        capsys, "sweep", "--machine", "pdc-112", "--grid", "T=0.5:1:3", "--out", str(out)
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "T,branch,F_A,F_B,prob,residual"
    assert len(lines) == 1 + 3 * 2  # two branches per grid point
    assert "[PASS]" in err


def test_sweep_to_stdout_jsonl(capsys):
    code, out, _ = run_cli(
        capsys, "sweep", "--machine", "asym1n", "--n", "3",
        "--grid", "y=0:1:3", "--format", "jsonl",
    )
    assert code == 0
    recs = [json.loads(line) for line in out.strip().splitlines()]
    assert len(recs) == 3
    assert recs[0]["schema_version"] == 1


def test_sweep_parallel_matches_serial(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "--machine", "pdc-111", "--grid", "T=0.5:1:4", "--seed", "6"]
    assert run_cli(capsys, *args, "--out", str(a))[0] == 0
    assert run_cli(capsys, *args, "--jobs", "2", "--out", str(b))[0] == 0
    assert a.read_text() == b.read_text()


def test_point_prints_json_record(capsys):
    code, out, _ = run_cli(capsys, "point", "--machine", "choi", "--weights", "1,1,1")
    assert code == 0
    rec = json.loads(out)
    assert abs(rec["fidelities"]["F_A"] - 7.0 / 9.0) < 1e-7
    code, out, _ = run_cli(
        capsys, "point", "--machine", "pdc-112", "--t", "0.75", "--branch", "1+2"
    )
    assert code == 0
    assert json.loads(out)["params"]["branch"] == "1+2"


def test_point_requires_machine_parameters(capsys):
    code, _, err = run_cli(capsys, "point", "--machine", "pdc-1111", "--t1", "0.8")
    assert code == 2
    assert "--t2" in err


def test_usage_errors_exit_2(capsys):
    code, _, err = run_cli(capsys, "sweep", "--machine", "choi", "--grid", "zzz")
    assert code == 2
    code, _, err = run_cli(capsys, "sweep", "--machine", "choi", "--grid", "a=0:2:5")
    assert code == 2
    assert "domain" in err
    code, _, _ = run_cli(capsys, "frontier", "--machine", "asym1n", "--points", "1")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--machine", "starship"])
    assert exc.value.code == 2


def test_config_file_with_flag_override(capsys, tmp_path):
    ini = tmp_path / "bench.ini"
    ini.write_text(
        "[sweep]\nmachine = asym1n\nn = 3\nformat = jsonl\n\n"
        "[sweep.grids]\ny = 0:1:3\n"
    )
    code, out, _ = run_cli(capsys, "sweep", "--config", str(ini))
    assert code == 0
    assert len(out.strip().splitlines()) == 3
    # a flag overrides the same setting from the file
    code, out, _ = run_cli(capsys, "sweep", "--config", str(ini), "--grid", "y=0:1:5")
    assert len(out.strip().splitlines()) == 5
    code, out, _ = run_cli(capsys, "sweep", "--config", str(ini), "--format", "csv")
    assert out.splitlines()[0].startswith("y,")
    code, _, err = run_cli(capsys, "sweep", "--config", str(tmp_path / "missing.ini"))
    assert code == 2


def test_seed_comes_from_environment_when_not_given(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("CLONEBENCH_SEED", "11")
    env_out = tmp_path / "env.csv"
    flag_out = tmp_path / "flag.csv"
    args = ["sweep", "--machine", "asym1n", "--grid", "y=0:1:3"]
    run_cli(capsys, *args, "--out", str(env_out))
    run_cli(capsys, *args, "--seed", "11", "--out", str(flag_out))
    assert env_out.read_text() == flag_out.read_text()
    monkeypatch.setenv("CLONEBENCH_SEED", "eleven")
    code, _, err = run_cli(capsys, *args)
    assert code == 2
    assert "CLONEBENCH_SEED" in err


def test_frontier_subcommand(capsys):
    code, out, err = run_cli(
        capsys, "frontier", "--machine", "choi", "--d", "2", "--points", "3"
    )
    assert code == 0
    assert "[PASS]" in err
    header = out.splitlines()[0]
    assert header.startswith("a,b,c")


def test_verify_subcommand_passes_and_reports(capsys, tmp_path):
    report = tmp_path / "report.json"
    code, out, _ = run_cli(capsys, "verify", "--quiet", "--report", str(report))
    assert code == 0
    lines = [l for l in out.splitlines() if l.startswith("[")]
    assert len(lines) == 10
    assert all(l.startswith("[PASS]") for l in lines)
    payload = json.loads(report.read_text())
    assert payload["passed"] is True
    assert len(payload["criteria"]) == 10
    # every check is a (computed, reference, residual) triple
    for crit in payload["criteria"]:
        for check in crit["checks"]:
            assert {"label", "computed", "reference", "residual", "tolerance"} <= set(check)


def test_verify_failure_injection_names_criterion(capsys):
    code, out, _ = run_cli(capsys, "verify", "--quiet", "--inject-failure", "9")
    assert code == 1
    fails = [l for l in out.splitlines() if l.startswith("[FAIL]")]
    assert len(fails) == 1
    assert "criterion  9" in fails[0]
    code, _, err = run_cli(capsys, "verify", "--inject-failure", "77")
    assert code == 2
