import pandas as pd
import pytest

from nanoshuttle.cli import constants_panel, main
from nanoshuttle.schemas import DeviceModel


def test_spectrum_command(tmp_path, capsys):
    out = tmp_path / "table.csv"
    assert main(["spectrum", "--cutoff", "125", "--out", str(out)]) == 0
    assert "5 levels (8 states)" in capsys.readouterr().out
    assert len(pd.read_csv(out)) == 8


def test_spectrum_prints_reference_panel(tmp_path, capsys):
    assert main(["spectrum", "--out", str(tmp_path / "table.xlsx")]) == 0
    stdout = capsys.readouterr().out
    assert "published_meV" in stdout
    assert "909.6" in stdout


def test_simulate_then_analyze(tmp_path, capsys):
    trace = tmp_path / "trace.csv"
    report = tmp_path / "report.csv"
    args = ["simulate", "--from", "0", "--to", "0.6", "--no-noise", "--out", str(trace)]
    assert main(args) == 0
    stdout = capsys.readouterr().out
    assert "threshold: 0.2440 V" in stdout

    assert main(["analyze", str(trace), "--out", str(report)]) == 0
    stdout = capsys.readouterr().out
    assert "[3,2,2]" in stdout
    assert "E_c estimate: 35" in stdout
    assert report.exists()


def test_seed_falls_back_to_environment(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("NANOSHUTTLE_SEED", "17")
    assert main(["simulate", "--from", "0", "--to", "0.1", "--out", str(tmp_path / "t.csv")]) == 0
    assert "seed 17" in capsys.readouterr().out


def test_gate_simulation(tmp_path, capsys):
    args = ["simulate", "--kind", "gate", "--from", "0", "--to", "3", "--out", str(tmp_path / "g.csv")]
    assert main(args) == 0
    assert "[2,2,3]" in capsys.readouterr().out
    assert main(["analyze", str(tmp_path / "g.csv"), "--kind", "gate", "--out", str(tmp_path / "r.csv")]) == 0
    assert "alpha = 0.38" in capsys.readouterr().out


def test_inconsistent_sweep_is_usage_error(capsys):
    assert main(["simulate", "--from", "0", "--to", "1", "--direction", "down"]) == 2
    assert "usage:" in capsys.readouterr().err


def test_malformed_trace_is_usage_error(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("voltage_V,current_pA,annotation\n0.0,x,\n", encoding="utf-8")
    assert main(["analyze", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_missing_trace_file(tmp_path):
    assert main(["analyze", str(tmp_path / "missing.csv")]) == 2


def test_bad_config_is_usage_error(tmp_path, capsys):
    config = tmp_path / "device.ini"
    config.write_text("[geometry]\ndepth = 1\n", encoding="utf-8")
    assert main(["constants", "--config", str(config)]) == 2
    assert "unknown key 'depth'" in capsys.readouterr().err


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("", encoding="utf-8")
    assert main(["spectrum", "--cutoff", "100", "--out", str(blocker / "table.csv")]) == 2


def test_unknown_command():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_constants_panel():
    lines = "\n".join(constants_panel(DeviceModel()))
    assert "C = 2.210 aF" in lines
    assert "E_c = 36.25 meV" in lines
    assert "alpha = 0.3808, C_g = 0.8415 aF" in lines
    assert "W = 44.94 meV" in lines
    assert "tau = 1.000e-07 s" in lines
    assert "drive energy = 420.0 meV" in lines
    assert "I_peak = 1.602 pA" in lines
    assert "dE_n = 29.38 meV" in lines
    assert "lambda = 0.1914 (WEAK" in lines
    assert "STRONG" in lines
    assert all("[" in line for line in lines.splitlines())


def test_constants_command(capsys):
    assert main(["constants"]) == 0
    assert "omega0" in capsys.readouterr().out


def test_spectrum_row_for_staircase_state(tmp_path):
    out = tmp_path / "table.csv"
    assert main(["spectrum", "--cutoff", "950", "--out", str(out)]) == 0
    df = pd.read_csv(out)
    row = df[(df.nx == 5) & (df.ny == 4) & (df.nz == 4)].iloc[0]
    assert row.energy_meV == pytest.approx(909.6, abs=0.5)
    assert row.occupation_N == 13
    assert row.degeneracy == 2


def test_spectrum_below_ground_state_writes_header_only(tmp_path):
    out = tmp_path / "table.csv"
    assert main(["spectrum", "--cutoff", "10", "--out", str(out)]) == 0
    assert out.read_text(encoding="utf-8").splitlines() == ["nx,ny,nz,energy_meV,occupation_N,degeneracy"]


def test_simulate_is_deterministic(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (first, second):
        assert main(["simulate", "--from", "0", "--to", "1", "--seed", "1", "--out", str(out)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_analyze_flat_trace(tmp_path, capsys):
    flat = tmp_path / "flat.csv"
    rows = "".join(f"{i / 1000:g},0,\n" for i in range(50))
    flat.write_text("voltage_V,current_pA,annotation\n" + rows, encoding="utf-8")
    assert main(["analyze", str(flat), "--out", str(tmp_path / "r.csv")]) == 0
    assert "peaks: 0" in capsys.readouterr().out


def test_constants_with_low_resistance(tmp_path, capsys):
    config = tmp_path / "device.ini"
    config.write_text("[junction]\njunction_resistance_R = 1e9\n", encoding="utf-8")
    assert main(["constants", "--config", str(config)]) == 0
    assert "I_peak = 160.2 pA" in capsys.readouterr().out


@pytest.mark.parametrize("cutoff", ["0", "-5"])
def test_non_positive_cutoff_is_usage_error(tmp_path, capsys, cutoff):
    assert main(["spectrum", "--cutoff", cutoff, "--out", str(tmp_path / "t.csv")]) == 2
    assert "cutoff must be positive" in capsys.readouterr().err


def test_non_positive_tolerance_is_usage_error(tmp_path, capsys):
    trace = tmp_path / "trace.csv"
    assert main(["simulate", "--from", "0", "--to", "0.4", "--no-noise", "--out", str(trace)]) == 0
    assert main(["analyze", str(trace), "--tol", "0", "--out", str(tmp_path / "r.csv")]) == 2
    assert "tol must be positive" in capsys.readouterr().err


def test_bad_seed_in_environment_is_usage_error(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("NANOSHUTTLE_SEED", "abc")
    assert main(["simulate", "--from", "0", "--to", "0.1", "--out", str(tmp_path / "t.csv")]) == 2
    assert "NANOSHUTTLE_SEED" in capsys.readouterr().err
