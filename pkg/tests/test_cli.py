import csv
import filecmp

import numpy as np
import pytest

from ottokiln.cli import main


def read_csv(path):
    with open(path, newline="") as handle:
        return list(csv.DictReader(handle))


def test_simulate_defaults_reach_the_ideal_efficiency(tmp_path):
    out = tmp_path / "run"
    assert main(["simulate", "--out", str(out)]) == 0
    cycles = read_csv(out / "cycles.csv")
    assert len(cycles) == 20
    assert abs(float(cycles[-1]["efficiency"]) - 1.0 / 3.0) < 1e-3


def test_simulate_timeseries_rows_are_consistent(tmp_path):
    out = tmp_path / "run"
    config = tmp_path / "cfg.txt"
    config.write_text("n_cycles = 2\n")
    assert main(["simulate", "--config", str(config), "--out", str(out), "--wide"]) == 0

    rows = read_csv(out / "timeseries.csv")
    times = [float(r["t"]) for r in rows]
    assert all(b > a for a, b in zip(times, times[1:]))
    for row in rows:
        assert abs(float(row["p_sum"]) - 1.0) <= 1e-9
        assert row["stroke"] in {"hot_isochore", "expansion", "cold_isochore", "compression"}

    wide = read_csv(out / "timeseries_wide.csv")
    level_names = [k for k in wide[0] if k.startswith("P_")]
    assert len(level_names) == 51
    for row in wide[:50]:
        probs = np.array([float(row[name]) for name in level_names])
        assert abs(probs.sum() - 1.0) <= 1e-9
        u = float(row["omega"]) * float(np.arange(51) @ probs)
        assert abs(u - float(row["U"])) <= 1e-9


def test_repeated_runs_are_byte_identical(tmp_path):
    config = tmp_path / "cfg.txt"
    config.write_text("n_cycles = 3\ntau = 1.0\n")
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["simulate", "--config", str(config), "--out", str(out_a)]) == 0
    assert main(["simulate", "--config", str(config), "--out", str(out_b)]) == 0
    for name in ("timeseries.csv", "cycles.csv"):
        assert filecmp.cmp(out_a / name, out_b / name, shallow=False), name


def test_pump_subcommand_matches_saturation_figure(tmp_path):
    out = tmp_path / "pump"
    config = tmp_path / "cfg.txt"
    config.write_text("tau_bc = 1\ntau_cd = 5\ntau_db = 1\nn_cycles = 4\n")
    assert main(["pump", "--config", str(config), "--out", str(out)]) == 0
    cycles = read_csv(out / "cycles.csv")
    assert abs(float(cycles[-1]["efficiency"]) - 0.3034) < 2e-2
    assert float(cycles[0]["q_pump"]) == pytest.approx(1.5, rel=1e-12)
    assert float(cycles[-1]["q_pump"]) == pytest.approx(1.3566586610668954, abs=1e-6)


def test_sweep_subcommand_writes_expected_columns(tmp_path):
    out = tmp_path / "sweep"
    config = tmp_path / "cfg.txt"
    config.write_text("sweep_t_h = 1.2\nsweep_ratio_steps = 11\n"
                      "sweep_ratio_min = 0.4\nsweep_ratio_max = 0.9\n")
    assert main(["sweep", "--config", str(config), "--out", str(out)]) == 0
    rows = read_csv(out / "sweep.csv")
    assert list(rows[0]) == ["t_h", "ratio", "efficiency", "power"]
    assert len(rows) == 11
    for row in rows:
        assert abs(float(row["efficiency"]) - (1.0 - float(row["ratio"]))) < 1e-9


def test_finite_mode_sweep_via_cli(tmp_path):
    out = tmp_path / "sweep"
    config = tmp_path / "cfg.txt"
    config.write_text("sweep_mode = finite\nsweep_t_h = 1.2\nsweep_ratio_steps = 3\n"
                      "sweep_ratio_min = 0.5\nsweep_ratio_max = 0.8\n"
                      "n_cycles = 10\ntau = 1.0\nn_max = 40\n")
    assert main(["sweep", "--config", str(config), "--out", str(out)]) == 0
    rows = read_csv(out / "sweep.csv")
    assert len(rows) == 3
    for row in rows:
        assert abs(float(row["efficiency"]) - (1.0 - float(row["ratio"]))) < 1e-3


def test_svg_emission_does_not_change_numeric_outputs(tmp_path):
    config = tmp_path / "cfg.txt"
    config.write_text("n_cycles = 2\n")
    plain, plotted = tmp_path / "plain", tmp_path / "plotted"
    assert main(["simulate", "--config", str(config), "--out", str(plain)]) == 0
    assert main(["simulate", "--config", str(config), "--out", str(plotted), "--svg"]) == 0
    for name in ("timeseries.csv", "cycles.csv"):
        assert filecmp.cmp(plain / name, plotted / name, shallow=False), name
    for extra in ("u_t.svg", "u_t.dat", "efficiency_n.svg", "efficiency_n.dat"):
        assert (plotted / extra).exists()
    assert (plotted / "u_t.svg").read_text().startswith("<svg")


def test_verify_subcommand_passes(capsys):
    assert main(["verify"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out
    assert "FAIL" not in out


def test_bad_config_is_a_clean_failure(tmp_path, capsys):
    config = tmp_path / "cfg.txt"
    config.write_text("omega_h = -1\n")
    assert main(["simulate", "--config", str(config), "--out", str(tmp_path / "x")]) == 1
    assert "omega_h" in capsys.readouterr().err


def test_mode_conflict_is_a_clean_failure(tmp_path, capsys):
    config = tmp_path / "cfg.txt"
    config.write_text("mode = pump\n")
    assert main(["simulate", "--config", str(config), "--out", str(tmp_path / "x")]) == 1
    assert "mode" in capsys.readouterr().err


def test_zero_cycles_run_writes_empty_series(tmp_path):
    config = tmp_path / "cfg.txt"
    config.write_text("n_cycles = 0\n")
    out = tmp_path / "empty"
    assert main(["simulate", "--config", str(config), "--out", str(out)]) == 0
    assert read_csv(out / "cycles.csv") == []
    assert read_csv(out / "timeseries.csv") == []
