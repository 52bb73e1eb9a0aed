"""Exit codes, config precedence, and rendering of the command line tool."""

import json
import subprocess
import sys

import pytest

from critspde.cli import main


def invoke(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as e:
        code = e.code
    out, err = capsys.readouterr()
    return code, out, err


def json_payload(out):
    head, body = out.split("\n{", 1)
    return json.loads("{" + body)


def test_calc_energy_space_instance(capsys):
    code, out, err = invoke(["calc", "--variant", "l2_eps", "--eps", "0"],
                            capsys)
    assert code == 0
    assert "critical weight kappa_crit = 0" in out
    assert "rho*=2, r=3, r'=3/2" in out
    payload = json_payload(out)
    assert payload["report"]["is_critical"] is True
    assert payload["report"]["kappa_crit"] == "0"


def test_calc_rough_config_file(tmp_path, capsys):
    cfg = {
        "growth": {"variant": "rough", "s": "1/5", "q": "5/2"},
        "setting": {
            "scale": {"low": "-6/5", "high": "4/5", "q": "5/2"},
            "p": "4",
            "kappa": "4/5",
        },
    }
    path = tmp_path / "rough.json"
    path.write_text(json.dumps(cfg))
    code, out, err = invoke(["calc", "--config", str(path)], capsys)
    assert code == 0
    assert "critical weight kappa_crit = 4/5" in out
    assert "trace space at kappa_crit: B^(-1/10)_(5/2,4)" in out


def test_calc_flag_overrides_file(tmp_path, capsys):
    cfg = {"growth": {"variant": "l2_eps", "eps": "0"}}
    path = tmp_path / "l2.json"
    path.write_text(json.dumps(cfg))
    code, out, err = invoke(
        ["calc", "--config", str(path), "--eps", "1/5"], capsys)
    assert code == 0
    assert "supercritical" in out  # eps=1/5 is supercritical at kappa=0


def test_calc_malformed_json(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{")
    code, out, err = invoke(["calc", "--config", str(path)], capsys)
    assert code == 1
    assert "malformed JSON" in err


def test_calc_empty_config(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text("{}")
    code, out, err = invoke(["calc", "--config", str(path)], capsys)
    assert code == 1


def test_calc_window_violation_exit_2(capsys):
    code, out, err = invoke(
        ["calc", "--variant", "l2_eps", "--eps", "0", "--p", "4"], capsys)
    assert code == 2
    assert "window violation in f[0]" in err
    assert "window violation in g[0]" in err


def test_plan_l2_start_renders_chain(capsys):
    code, out, err = invoke(["plan", "--variant", "l2_start"], capsys)
    assert code == 0
    assert "step 1: weight_insertion" in out
    assert "r=6, delta=1/10, alpha=7/5" in out
    assert "theta_sup=1/2" in out
    payload = json_payload(out)
    rules = [st["rule"] for st in payload["steps"]]
    assert rules == ["weight_insertion", "time_bootstrap",
                     "space_bootstrap", "space_bootstrap"]


def test_plan_rough_preset(capsys):
    code, out, err = invoke(["plan", "--preset", "rough-data-chain"], capsys)
    assert code == 0
    assert "extrapolation" in out


def test_plan_requires_variant_or_preset(capsys):
    code, out, err = invoke(["plan"], capsys)
    assert code == 1


def test_plan_rejected_parameters_exit_2(capsys):
    code, out, err = invoke(
        ["plan", "--variant", "l2_start", "--eps", "1/3"], capsys)
    assert code == 2
    assert "check failure" in err


def test_simulate_heat_writes_files(tmp_path, capsys):
    out_a = tmp_path / "a"
    code, out, err = invoke(
        ["simulate", "--preset", "heat", "--outdir", str(out_a)], capsys)
    assert code == 0
    assert "status completed" in out
    summary = json.loads((out_a / "simulate" / "summary.json").read_text())
    assert summary["status"] == "completed"
    assert (out_a / "simulate" / "path_0.csv").exists()

    out_b = tmp_path / "b"
    invoke(["simulate", "--preset", "heat", "--outdir", str(out_b)], capsys)
    assert (out_a / "simulate" / "path_0.csv").read_bytes() == \
        (out_b / "simulate" / "path_0.csv").read_bytes()


def test_simulate_outdir_from_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("CRITSPDE_OUTDIR", str(tmp_path / "envout"))
    code, out, err = invoke(["simulate", "--preset", "heat"], capsys)
    assert code == 0
    assert (tmp_path / "envout" / "simulate" / "summary.json").exists()


def test_simulate_unknown_preset_is_usage_error(capsys):
    code, out, err = invoke(["simulate", "--preset", "nope"], capsys)
    assert code == 1


def test_simulate_requires_preset(capsys):
    code, out, err = invoke(["simulate"], capsys)
    assert code == 1


def test_montecarlo_summary(tmp_path, capsys):
    code, out, err = invoke(
        ["montecarlo", "--preset", "linear-noise", "--t-end", "0.25",
         "--n-paths", "4", "--parallelism", "2", "--n-save", "3",
         "--outdir", str(tmp_path)], capsys)
    assert code == 0
    stats = json.loads(out)
    assert stats["n_paths"] == 4
    assert stats["survival"] == 1.0
    assert (tmp_path / "montecarlo" / "summary.json").exists()


def test_montecarlo_config_file_fields(tmp_path, capsys):
    cfg = {"preset": "heat", "n_paths": 3, "n_save": 2,
           "outdir": str(tmp_path / "fromfile")}
    path = tmp_path / "mc.json"
    path.write_text(json.dumps(cfg))
    code, out, err = invoke(["montecarlo", "--config", str(path)], capsys)
    assert code == 0
    assert json.loads(out)["n_paths"] == 3
    assert (tmp_path / "fromfile" / "montecarlo" / "summary.json").exists()


def test_verify_chain_suite_passes(capsys):
    code, out, err = invoke(["verify", "chain"], capsys)
    assert code == 0
    assert "criterion  5 [bootstrap-chain] PASS" in out
    assert "1/1 checks passed" in out


def test_verify_unknown_suite_is_usage_error(capsys):
    code, out, err = invoke(["verify", "nope"], capsys)
    assert code == 1


def test_unknown_flag_is_error(capsys):
    code, out, err = invoke(["simulate", "--bogus"], capsys)
    assert code == 1
    assert "unrecognized arguments" in err


def test_no_subcommand_is_usage_error(capsys):
    code, out, err = invoke([], capsys)
    assert code == 1


def test_console_script_help():
    proc = subprocess.run(["critspde", "--help"], capture_output=True,
                          text=True)
    assert proc.returncode == 0
    for name in ("calc", "plan", "simulate", "montecarlo", "verify"):
        assert name in proc.stdout
