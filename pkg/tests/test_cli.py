"""Config validation, CSV output, and command-line behavior."""

import csv
import json
import math
import subprocess
import sys

import pytest

from mistakeball.cli import (
    CSV_COLUMNS,
    EXPERIMENTS,
    ConfigError,
    main,
    run_experiment,
    summarize_csv,
    validate_config,
)

ENTROPY_MINIMAL = {
    "experiment": "entropy",
    "system": {"kind": "full_shift", "symbols": 2},
    "measure": {"kind": "bernoulli", "p": [0.5, 0.5]},
    "g": {"family": "zero"},
    "n_grid": [4, 6],
}


def cfg_text(**overrides):
    raw = dict(ENTROPY_MINIMAL)
    raw.update(overrides)
    return json.dumps(raw)


def diagnostics(text):
    with pytest.raises(ConfigError) as err:
        validate_config(text)
    return err.value.diagnostics


def test_minimal_entropy_config_gets_documented_defaults():
    cfg = validate_config(cfg_text())
    assert cfg.k_max == 10**7
    assert cfg.samples == 64
    assert cfg.master_seed == 0
    assert cfg.output_path == "results.csv"
    assert cfg.n_grid == [4, 6]
    assert cfg.system_label == "full_shift(2)"
    assert cfg.measure_label == "bernoulli(0.5,0.5)"


def test_power_theta_out_of_range_diagnostic():
    diags = diagnostics(cfg_text(g={"family": "power", "coeff": 1.0, "theta": 1.5}))
    assert ("g.theta", "theta must lie in (0,1)") in diags


def test_suspension_g2_defaults_to_g1():
    raw = {
        "experiment": "suspension",
        "system": {"kind": "full_shift", "symbols": 2},
        "measure": {"kind": "bernoulli", "p": [0.5, 0.5]},
        "g1": {"family": "constant", "c": 1},
        "roof": {"kind": "table", "values": [1.0, 2.0]},
        "n_grid": [4],
    }
    cfg = validate_config(json.dumps(raw))
    assert cfg.g2 == cfg.g1
    raw["g2"] = {"family": "zero"}
    cfg2 = validate_config(json.dumps(raw))
    assert cfg2.g2 != cfg2.g1 and cfg2.g2.family == "zero"


def test_unknown_keys_rejected_with_paths():
    diags = diagnostics(cfg_text(typo_field=1))
    assert any(path == "typo_field" and "unknown" in msg for path, msg in diags)
    diags = diagnostics(cfg_text(system={"kind": "full_shift", "symbols": 2, "beta": 2.0}))
    assert any(path == "system.beta" and "unknown" in msg for path, msg in diags)


def test_domain_violations():
    assert any(
        "beta" in path for path, _ in diagnostics(
            cfg_text(system={"kind": "beta", "beta": 0.9}, epsilon_grid=[0.1])
        )
    )
    assert any(
        path == "n_grid" for path, _ in diagnostics(cfg_text(n_grid=[]))
    )
    assert any(
        path == "n_grid" for path, _ in diagnostics(cfg_text(n_grid=[6, 4]))
    )
    assert any(
        path == "samples" for path, _ in diagnostics(cfg_text(samples=0))
    )
    assert any(  # booleans are not sample counts
        path == "samples" for path, _ in diagnostics(cfg_text(samples=True))
    )
    assert any(
        path == "experiment"
        for path, _ in diagnostics(json.dumps({"experiment": "nope"}))
    )
    bad_json = diagnostics("{not json")
    assert bad_json[0][0] == "$" and "invalid JSON" in bad_json[0][1]


def test_epsilon_grid_rules():
    diags = diagnostics(cfg_text(epsilon_grid=[0.1]))
    assert any(path == "epsilon_grid" and "interval" in msg for path, msg in diags)
    diags = diagnostics(
        cfg_text(system={"kind": "beta", "beta": 2.5}, measure={"kind": "lebesgue_start"})
    )
    assert any(path == "epsilon_grid" and "required" in msg for path, msg in diags)


def test_phi_rules():
    diags = diagnostics(cfg_text(phi=[0.0, -1.0]))
    assert any(path == "phi" and "equilibrium" in msg for path, msg in diags)
    raw = {
        "experiment": "pressure",
        "system": {"kind": "full_shift", "symbols": 2},
        "measure": {"kind": "bernoulli", "p": [0.5, 0.5]},
        "g": {"family": "zero"},
        "n_grid": [4],
    }
    diags = diagnostics(json.dumps(raw))
    assert any(path == "phi" and "required" in msg for path, msg in diags)
    raw["phi"] = [0.0, -1.0, 3.0]
    diags = diagnostics(json.dumps(raw))
    assert any(path == "phi" for path, _ in diags)


def test_equilibrium_measure_resolves_through_phi():
    cfg = validate_config(
        cfg_text(
            system={"kind": "golden_mean"},
            measure={"kind": "equilibrium"},
            phi=[0.0, 0.0],
        )
    )
    assert cfg.measure.kind == "markov"
    golden = (1 + math.sqrt(5)) / 2
    assert cfg.measure.P[0][0] == pytest.approx(1 / golden, abs=1e-9)


def run_cli(tmp_path, raw, *extra):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(raw))
    out = tmp_path / "rows.csv"
    code = main(["--config", str(path), "--out", str(out), *extra])
    return code, out


def test_entropy_run_writes_schema_and_sorted_rows(tmp_path):
    raw = dict(ENTROPY_MINIMAL, samples=5, k_max=2000)
    code, out = run_cli(tmp_path, raw)
    assert code == 0
    data = out.read_bytes()
    assert b"\r\n" in data and b"runtime_ms" in data
    rows = list(csv.DictReader(data.decode("utf-8").splitlines()))
    assert list(rows[0].keys()) == CSV_COLUMNS
    assert len(rows) == 2 * 5
    keys = [(int(r["n"]), float(r["epsilon"]), int(r["sample_index"])) for r in rows]
    assert keys == sorted(keys)
    assert all(r["runtime_ms"] == "" for r in rows)
    assert all(r["epsilon"] == "0" for r in rows)
    assert rows[0]["target"] == f"{math.log(2):.12g}"


def test_rerun_and_worker_count_are_byte_identical(tmp_path):
    raw = dict(ENTROPY_MINIMAL, samples=6, k_max=1500)
    _, out1 = run_cli(tmp_path, raw)
    first = out1.read_bytes()
    _, out2 = run_cli(tmp_path, raw)
    assert out2.read_bytes() == first
    code, out3 = run_cli(tmp_path, raw, "--workers", "4")
    assert code == 0
    assert out3.read_bytes() == first


def test_timings_flag_fills_runtime_without_reordering(tmp_path):
    raw = dict(ENTROPY_MINIMAL, samples=4, k_max=1000)
    code, out = run_cli(tmp_path, raw, "--timings")
    assert code == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert all(r["runtime_ms"].isdigit() for r in rows)
    assert len({r["runtime_ms"] for r in rows}) == 1  # run-level wall time


def test_seed_override_changes_rows(tmp_path):
    raw = dict(ENTROPY_MINIMAL, samples=4, k_max=1000)
    _, out1 = run_cli(tmp_path, raw)
    base = out1.read_text()
    code, out2 = run_cli(tmp_path, raw, "--seed", "1")
    assert code == 0
    assert out2.read_text() != base


def test_summary_is_recomputed_from_csv(tmp_path, capsys):
    raw = dict(ENTROPY_MINIMAL, samples=5, k_max=2000)
    code, out = run_cli(tmp_path, raw)
    capsys.readouterr()
    lines, status = summarize_csv(str(out))
    assert status == code == 0
    assert "(rates in nats)" in lines[0]
    assert any("overall censoring" in line for line in lines)


def test_high_censoring_fails_loudly(tmp_path, capsys):
    raw = dict(ENTROPY_MINIMAL, n_grid=[14], samples=8, k_max=40)
    code, out = run_cli(tmp_path, raw)
    text = capsys.readouterr().out
    assert code == 1
    assert "censoring" in text


def test_oracle_experiment_runs_clean(tmp_path, capsys):
    code, out = run_cli(tmp_path, {"experiment": "oracle"})
    text = capsys.readouterr().out
    assert code == 0
    assert "mismatches [ok]" in text
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert {r["experiment_id"] for r in rows} == {"oracle"}
    assert all(r["rate"] == "0" for r in rows)
    assert len(rows) == 5


def test_check_spec_exit_semantics(tmp_path, capsys):
    base = {
        "experiment": "check-spec",
        "system": {"kind": "golden_mean"},
        "n_grid": [4, 6],
        "mode": "sampled",
        "samples": 48,
    }
    code, _ = run_cli(tmp_path, dict(base, g={"family": "zero"}))
    text = capsys.readouterr().out
    assert code == 1
    assert "gluing failed at n = 6" in text
    code, _ = run_cli(tmp_path, dict(base, g={"family": "constant", "c": 1}))
    assert code == 0


def test_theoremC_run_targets_free_energy(tmp_path):
    raw = {
        "experiment": "theoremC",
        "system": {"kind": "full_shift", "symbols": 2},
        "measure": {"kind": "bernoulli", "p": [0.5, 0.5]},
        "g": {"family": "zero"},
        "phi": [0.0, -1.0],
        "which": "minimal",
        "n_grid": [6],
        "samples": 4,
    }
    code, out = run_cli(tmp_path, raw)
    assert code == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert float(rows[0]["target"]) == pytest.approx(-0.18633367647525045, abs=1e-9)
    assert all(r["S_n"] != "" and r["R_n"] == "" for r in rows)


def test_cli_error_exits(tmp_path, capsys):
    assert main([]) == 2
    assert main(["--config", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"experiment": "entropy"}))
    assert main(["--config", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "config error at" in err
    good = tmp_path / "good.json"
    good.write_text(cfg_text(samples=2, k_max=500))
    assert main(["--config", str(good), "--seed", "-1"]) == 2
    assert main(["--config", str(good), "--workers", "0"]) == 2


def test_list_experiments(capsys):
    assert main(["--list-experiments"]) == 0
    text = capsys.readouterr().out
    for name in EXPERIMENTS:
        assert name in text


def test_module_entry_point(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "mistakeball.cli", "--list-experiments"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert "entropy" in out.stdout
