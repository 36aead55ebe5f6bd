"""Command-line behavior: flags, config, exit codes, determinism."""
import json
import os
import subprocess
import sys

import pytest

from coopsir import cli
from coopsir.errors import ConvergenceError, OracleValidationError
from coopsir.model import Scheme, theta_from_db
from coopsir.oracle import empirical_cdf_grid
from coopsir.sweeps import SweepSpec


def run_main(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def data_lines(out):
    return out.strip().splitlines()[1:]


def test_cdf_defaults_include_the_full_baseline(capsys):
    code, out, _ = run_main(capsys, "cdf", "--theta-db", "0")
    assert code == 0
    lines = data_lines(out)
    assert len(lines) == 3
    assert lines[0].startswith("full-interference,10,0,0.5,3.5,0,1,0.571292418,")


def test_k_exceeds_eta_exits_2(capsys):
    code, out, err = run_main(capsys, "cdf", "--k", "12", "--eta", "10")
    assert code == 2
    assert out == ""
    assert err.count("\n") == 1
    assert "k exceeds eta" in err


def test_theta_grid_spellings(capsys):
    code, out, _ = run_main(capsys, "cdf", "--scheme", "silencing",
                            "--theta-db", "-10:30:2")
    assert code == 0 and len(data_lines(out)) == 21
    code, out, _ = run_main(capsys, "cdf", "--scheme", "silencing",
                            "--theta-db", "0,3,6")
    assert code == 0 and len(data_lines(out)) == 3
    code, out, _ = run_main(capsys, "cdf", "--scheme", "silencing",
                            "--theta-db", "4")
    assert code == 0 and len(data_lines(out)) == 1


def test_malformed_grids_exit_2(capsys):
    for argv in (["cdf", "--theta-db", "5:1:2"],
                 ["cdf", "--theta-db", "0:10:0"],
                 ["cdf", "--theta-db", "a,b"],
                 ["cdf", "--k-list", "1,x"],
                 ["rate", "--epsilon", "nope"]):
        code, _, err = run_main(capsys, *argv)
        assert code == 2, argv
        assert err.startswith("error:")


def test_k_and_k_list_are_mutually_exclusive(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["cdf", "--k", "2", "--k-list", "0,2"])
    assert exc.value.code == 2


def test_rate_defaults_and_unbounded_marker(capsys):
    code, out, _ = run_main(capsys, "rate", "--scheme", "silencing",
                            "--k-list", "0,10")
    assert code == 0
    lines = data_lines(out)
    assert lines[0].startswith("silencing,10,0,0.5,3.5,1e-05,4.67035198")
    assert lines[1].endswith(",unbounded")


def test_rate_epsilon_overrides_epsilon_list(capsys):
    code, out, _ = run_main(capsys, "rate", "--scheme", "silencing", "--k", "0",
                            "--epsilon", "1e-3",
                            "--epsilon-list", "1e-1,1e-2")
    assert code == 0
    lines = data_lines(out)
    assert len(lines) == 1 and ",0.001," in lines[0]


def test_mink_headline_rows(capsys):
    code, out, _ = run_main(capsys, "mink", "--epsilon", "1e-5")
    assert code == 0
    sil, mrt = data_lines(out)
    assert sil.startswith("silencing") and ",10,0" in sil
    assert "unachievable,0.000229348094" in mrt


def test_mc_columns_match_direct_oracle(capsys):
    code, out, _ = run_main(capsys, "mc", "--scheme", "mrt", "--k", "4",
                            "--theta-db", "0,6", "--mc-samples", "20000",
                            "--seed", "11", "--workers", "1")
    assert code == 0
    spec = SweepSpec(schemes=(Scheme.MRT,), eta=10, k_list=(4,), delta=0.5,
                     alpha=3.5, theta_db_values=(0.0, 6.0))
    direct = empirical_cdf_grid(Scheme.MRT, spec.params(4),
                                [theta_from_db(0.0), theta_from_db(6.0)],
                                20000, 11)
    for line, est in zip(data_lines(out), direct):
        cells = line.split(",")
        assert cells[9] == f"{est.value:.9g}"
        assert cells[12] == "20000" and cells[13] == "11"


def test_tail_refusal_and_override(capsys):
    code, _, err = run_main(capsys, "cdf", "--scheme", "mrt", "--k", "6",
                            "--theta-db", "-10", "--mc-samples", "20000")
    assert code == 2
    assert "--tail-ok" in err
    code, out, _ = run_main(capsys, "cdf", "--scheme", "mrt", "--k", "6",
                            "--theta-db", "-10", "--mc-samples", "20000",
                            "--tail-ok")
    assert code == 0
    assert data_lines(out)[0].split(",")[9] != ""


def test_json_format_and_output_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, out, _ = run_main(capsys, "cdf", "--theta-db", "0", "--format", "json",
                            "--output", str(target))
    assert code == 0 and out == ""
    payload = json.loads(target.read_text())
    assert payload["kind"] == "cdf"
    assert payload["rows"][0]["outage_cf"] == 0.57129241788376365
    assert payload["rows"][0]["outage_mc"] is None


def test_config_defaults_and_flag_precedence(tmp_path, capsys):
    conf = tmp_path / "demo.conf"
    conf.write_text("# demo\nscheme = silencing\nk = 6\ntheta-db = 0\n"
                    "format = json\nwith-quadrature = true\n")
    code, out, _ = run_main(capsys, "cdf", "--config", str(conf))
    assert code == 0
    row = json.loads(out)["rows"][0]
    assert row["scheme"] == "silencing" and row["k"] == 6
    assert abs(row["outage_quad"] - row["outage_cf"]) < 1e-8
    code, out, _ = run_main(capsys, "cdf", "--config", str(conf),
                            "--k", "2", "--format", "csv")
    assert code == 0
    assert data_lines(out)[0].startswith("silencing,10,2,")


def test_config_rejections(tmp_path, capsys):
    bad_key = tmp_path / "a.conf"
    bad_key.write_text("bogus = 1\n")
    code, _, err = run_main(capsys, "cdf", "--config", str(bad_key))
    assert code == 2 and "unknown key" in err
    bad_bool = tmp_path / "b.conf"
    bad_bool.write_text("with-quadrature = maybe\n")
    code, _, err = run_main(capsys, "cdf", "--config", str(bad_bool))
    assert code == 2 and "true/false" in err
    no_eq = tmp_path / "c.conf"
    no_eq.write_text("just words\n")
    code, _, err = run_main(capsys, "cdf", "--config", str(no_eq))
    assert code == 2 and "key = value" in err
    code, _, err = run_main(capsys, "cdf", "--config", str(tmp_path / "missing.conf"))
    assert code == 2 and "cannot read config" in err


def test_workers_env_is_validated(capsys, monkeypatch):
    monkeypatch.setenv("COOPSIR_WORKERS", "abc")
    code, _, err = run_main(capsys, "cdf", "--theta-db", "0")
    assert code == 2 and "COOPSIR_WORKERS" in err
    monkeypatch.setenv("COOPSIR_WORKERS", "0")
    code, _, err = run_main(capsys, "cdf", "--theta-db", "0")
    assert code == 2


def test_numerical_failures_map_to_exit_3_and_4(capsys, monkeypatch):
    def boom(spec):
        raise ConvergenceError("no convergence")
    monkeypatch.setattr(cli, "run_cdf", boom)
    code, _, err = run_main(capsys, "cdf", "--theta-db", "0")
    assert code == 3 and "no convergence" in err

    def stale(spec):
        raise OracleValidationError("oracle mismatch")
    monkeypatch.setattr(cli, "run_cdf", stale)
    code, _, err = run_main(capsys, "cdf", "--theta-db", "0")
    assert code == 4 and "oracle mismatch" in err


def test_validate_no_mc_passes(capsys):
    code, out, _ = run_main(capsys, "validate", "--no-mc")
    assert code == 0
    assert out.strip().endswith("PASS")
    assert "grid v1" in out
    assert "mc 3-sigma checks: 0 points checked" in out


def test_validate_negative_control_exits_4():
    env = dict(os.environ, COOPSIR_PERTURB_DELTA_ALPHA="3e-4")
    proc = subprocess.run([sys.executable, "-m", "coopsir.cli", "validate",
                           "--no-mc"], capture_output=True, text=True, env=env)
    assert proc.returncode == 4
    assert "FAIL" in proc.stdout


def test_output_bytes_identical_across_runs_and_workers():
    argv = [sys.executable, "-m", "coopsir.cli", "mc", "--scheme", "mrt",
            "--k", "4", "--theta-db", "0:6:3", "--mc-samples", "30000",
            "--seed", "5"]
    outs = []
    for workers in ("1", "2", "1"):
        proc = subprocess.run(argv + ["--workers", workers],
                              capture_output=True, env=dict(os.environ))
        assert proc.returncode == 0
        outs.append(proc.stdout)
    assert outs[0] == outs[1] == outs[2]
