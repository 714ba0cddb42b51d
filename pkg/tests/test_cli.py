import json

import numpy as np
import pytest

from pinchwave.cli import (
    EXIT_CONFIG,
    EXIT_INFEASIBLE,
    EXIT_OK,
    EXIT_VERIFY,
    main,
)


def test_solve_writes_machine_readable_result(tmp_path, capsys):
    out = tmp_path / "solve.json"
    code = main(["solve", "--user", "2.0,1.5", "--antennas", "4", "--out", str(out)])
    assert code == EXIT_OK
    payload = json.loads(out.read_text())
    xs = payload["refined"]["antenna_x"]
    assert len(xs) == 4
    assert abs(np.mean(xs) - 2.0) < 0.05
    gaps = np.diff(payload["stage1"]["antenna_x"])
    assert np.allclose(gaps, 0.00535343675, atol=1e-9)
    rates = payload["rates_bits_per_hz"]
    assert rates["pinching_two_stage"] >= rates["pinching_stage1_only"] - 1e-12
    text = capsys.readouterr().out
    assert "stage-1 layout" in text
    assert "refined layout" in text


def test_solve_single_antenna_closed_form(tmp_path):
    out = tmp_path / "one.json"
    code = main(["solve", "--user", "0,0", "--antennas", "1", "--out", str(out)])
    assert code == EXIT_OK
    payload = json.loads(out.read_text())
    # defaults: 30 dBm power, -90 dBm noise, 3 m height, 28 GHz
    assert payload["rates_bits_per_hz"]["pinching_two_stage"] == pytest.approx(
        16.299599908747194, rel=1e-9
    )
    assert payload["refined"]["antenna_x"] == [0.0]


def test_solve_requires_user(capsys):
    code = main(["solve", "--antennas", "2"])
    assert code == EXIT_INFEASIBLE
    assert "user" in capsys.readouterr().err


def test_missing_config_file_names_path(capsys):
    code = main(["solve", "--config", "/nonexistent/cfg.json", "--user", "0,0"])
    assert code == EXIT_CONFIG
    assert "/nonexistent/cfg.json" in capsys.readouterr().err


def test_malformed_json_reports_location(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{"power_dbm": 30.0,\n  "trials": }\n')
    code = main(["solve", "--config", str(cfg), "--user", "0,0"])
    assert code == EXIT_CONFIG
    err = capsys.readouterr().err
    assert "line 2" in err


def test_unknown_config_field_rejected(tmp_path, capsys):
    cfg = tmp_path / "unknown.json"
    cfg.write_text('{"powr_dbm": 30.0}')
    code = main(["solve", "--config", str(cfg), "--user", "0,0"])
    assert code == EXIT_CONFIG
    assert "powr_dbm" in capsys.readouterr().err


def test_mistyped_config_field_rejected(tmp_path, capsys):
    cfg = tmp_path / "typed.json"
    cfg.write_text('{"num_antennas": "four"}')
    code = main(["solve", "--config", str(cfg), "--user", "0,0"])
    assert code == EXIT_CONFIG
    assert "num_antennas" in capsys.readouterr().err


def test_sweep_row_count_and_header(tmp_path):
    out = tmp_path / "sweep.csv"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"sweep_values": [10.0, 20.0], "trials": 20}))
    code = main([
        "sweep", "--config", str(cfg),
        "--systems", "conventional,pinching_two_stage",
        "--antennas", "2", "--seed", "5", "--out", str(out),
    ])
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    meta = [l for l in lines if l.startswith("#")]
    data = [l for l in lines if not l.startswith("#")]
    assert data[0] == "sweep_value,system,mean_rate_bps_hz,stderr,trials,seed"
    assert len(data) == 1 + 4  # header + 2 values x 2 systems
    assert any("seed = 5 [flag]" in l for l in meta)
    assert any("rng_algorithm" in l for l in meta)
    assert any("power_dbm = 30.0 [default]" in l for l in meta)
    first = data[1].split(",")
    assert first[0] == "10.0"
    assert first[1] == "conventional"
    assert first[4] == "20"
    assert first[5] == "5"


def test_sweep_rerun_byte_identical(tmp_path):
    argv_base = [
        "sweep", "--systems", "conventional", "--antennas", "2",
        "--trials", "25", "--seed", "11",
    ]
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main(argv_base + ["--out", str(out1)]) == EXIT_OK
    assert main(argv_base + ["--out", str(out2)]) == EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()
    assert b"\r" not in out1.read_bytes()  # LF line endings only


def test_sweep_to_stdout(capsys):
    code = main([
        "sweep", "--systems", "conventional", "--antennas", "1", "--trials", "5",
    ])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "sweep_value,system," in out


def test_sweep_oracle_antenna_guard(capsys):
    code = main([
        "sweep", "--systems", "pinching_oracle", "--antennas", "4", "--trials", "2",
    ])
    assert code == EXIT_INFEASIBLE
    assert "oracle" in capsys.readouterr().err


def test_sweep_oracle_default_trials(tmp_path):
    out = tmp_path / "oracle.csv"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"sweep_values": [30.0], "trials": 4}))
    code = main([
        "sweep", "--config", str(cfg),
        "--systems", "pinching_two_stage,pinching_oracle",
        "--antennas", "2", "--out", str(out),
    ])
    assert code == EXIT_OK
    rows = [l for l in out.read_text().splitlines() if not l.startswith("#")][1:]
    assert len(rows) == 2
    # paired draws: both systems say trials=4, same seed
    for row in rows:
        assert row.split(",")[4] == "4"


def test_unknown_system_rejected(capsys):
    code = main(["sweep", "--systems", "quantum", "--trials", "2"])
    assert code == EXIT_INFEASIBLE
    assert "quantum" in capsys.readouterr().err


def test_verify_passes(capsys):
    code = main(["verify", "--seed", "42", "--cases", "4"])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert out.count("PASS") == 3
    assert "FAIL" not in out


def test_verify_rejects_corrupt_spacing(tmp_path, capsys):
    cfg = tmp_path / "corrupt.json"
    cfg.write_text('{"min_spacing_m": 0.0}')
    code = main(["verify", "--config", str(cfg)])
    assert code == EXIT_INFEASIBLE
    out = capsys.readouterr()
    assert "PASS" not in out.out  # refused before any suite ran
    assert "min_spacing" in out.err


def test_exit_codes_are_distinct():
    assert len({EXIT_OK, EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_VERIFY}) == 4
