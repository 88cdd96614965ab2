"""Command-line behavior: output formats, overrides, error paths."""

import numpy as np
import pytest

from cmclab import AXIAL, load_state, parse_records
from cmclab import kasner
from cmclab.cli import build_parser, load_config, main


def _main(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parser_rejects_unknown_command():
    with pytest.raises(SystemExit) as err:
        build_parser().parse_args(["launch"])
    assert err.value.code == 2


def test_flag_overrides_win_over_config(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("command = verify\ngrid_n = 16\nseed = 1\n")
    args = build_parser().parse_args(
        ["evolve", "--config", str(cfg), "--grid", "8", "--seed", "9"])
    config = load_config(args)
    assert config.command == "evolve"  # positional wins
    assert config.grid_n == 8
    assert config.seed == 9


def test_verify_prints_pass_lines(capsys):
    code, out, err = _main(capsys, "verify", "--grid", "8")
    assert code == 0
    lines = [l for l in out.splitlines() if l]
    assert len(lines) >= 10
    assert all(l.startswith("PASS ") for l in lines)


def test_oracle_reports_decay_law(capsys, tmp_path):
    cfg = tmp_path / "o.cfg"
    cfg.write_text("command = oracle\ntimes = -1.0, -0.5\n")
    code, out, err = _main(capsys, "oracle", "--config", str(cfg))
    assert code == 0
    values = {}
    for line in out.splitlines():
        if line.startswith("e_br = "):
            values.setdefault("e_br", []).append(float(line.split("=")[1]))
    # axial default: E_BR(t) = (8/27) |t|^3, so the ratio across the two
    # times is (1.0/0.5)^3 = 8
    assert values["e_br"][0] / values["e_br"][1] == pytest.approx(8.0, rel=1e-12)
    assert f"energy_coefficient = {repr(AXIAL.energy_coefficient)}" in out


def test_evolve_writes_parsable_deterministic_records(capsys, tmp_path):
    cfg = tmp_path / "e.cfg"
    cfg.write_text(
        "command = evolve\ngrid_n = 8\nt0 = -1.0\nt_end = -0.95\n"
        "dt = 0.01\ncadence = 2\nsolver_tol = 1e-11\n"
    )
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    code, out, _ = _main(capsys, "evolve", "--config", str(cfg),
                         "--output", str(out_a))
    assert code == 0
    assert f"wrote {out_a}" in out
    code, _, _ = _main(capsys, "evolve", "--config", str(cfg),
                       "--output", str(out_b))
    assert code == 0
    assert out_a.read_bytes() == out_b.read_bytes()

    records = parse_records(out_a)
    assert records[0].t == -1.0
    assert records[-1].t == pytest.approx(-0.95, abs=1e-14)
    # cadence 2 on 5 steps: slices at -1.0, -0.98, -0.96, -0.95
    assert len(records) == 4
    want = kasner.br_energy(AXIAL, -1.0, 1.0)
    assert records[0].e_br == pytest.approx(want, rel=1e-12)


def test_evolve_snapshot_round_trip(capsys, tmp_path):
    cfg = tmp_path / "s.cfg"
    snap = tmp_path / "final.npz"
    cfg.write_text(
        "command = evolve\ngrid_n = 8\nt0 = -1.0\nt_end = -0.98\ndt = 0.01\n"
        f"snapshot_path = {snap}\n"
    )
    code, out, _ = _main(capsys, "evolve", "--config", str(cfg),
                         "--output", str(tmp_path / "r.csv"))
    assert code == 0
    state = load_state(snap)
    assert state.t == pytest.approx(-0.98, abs=1e-14)


def test_stdout_when_no_output_path(capsys, tmp_path):
    cfg = tmp_path / "e.cfg"
    cfg.write_text("command = evolve\ngrid_n = 8\nt0 = -1.0\nt_end = -0.99\n"
                   "dt = 0.01\n")
    code, out, _ = _main(capsys, "evolve", "--config", str(cfg))
    assert code == 0
    records = parse_records(out)
    assert len(records) == 2


def test_missing_config_file_reports_error(capsys):
    code, out, err = _main(capsys, "evolve", "--config", "/nonexistent.cfg")
    assert code == 1
    assert err.startswith("ERROR FileNotFoundError")


def test_config_parse_failure_reports_error(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("command = evolve\nwhat even is this\n")
    code, out, err = _main(capsys, "evolve", "--config", str(cfg))
    assert code == 1
    assert err.startswith("ERROR ParseError")
    assert "line 2" in err


def test_validation_failure_reports_error(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("command = evolve\ngrid_n = 4\n")
    code, out, err = _main(capsys, "evolve", "--config", str(cfg))
    assert code == 1
    assert err.startswith("ERROR ValidationError")


def test_module_is_runnable(tmp_path):
    import subprocess, sys
    proc = subprocess.run(
        [sys.executable, "-m", "cmclab.cli", "oracle"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert "decay_exponent = 3.0" in proc.stdout
