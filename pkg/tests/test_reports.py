import numpy as np
import pandas as pd
import pytest

from nanoshuttle.analysis import build_peak_report
from nanoshuttle.errors import TraceFormatError
from nanoshuttle.mechanics import zigzag_noise
from nanoshuttle.reports import (
    TABLE_COLUMNS,
    format_peak_summary,
    read_trace_csv,
    table_i_panel,
    write_peak_report,
    write_table,
    write_trace_csv,
    write_zigzag_csv,
)
from nanoshuttle.schemas import MechanicalParams, SweepConfig, SweepDirection
from nanoshuttle.spectrum import enumerate_levels
from nanoshuttle.transport import TraceLabel, simulate_drain_sweep


def test_write_table_csv(tmp_path, geometry):
    path = write_table(enumerate_levels(geometry, 125.0), tmp_path / "out" / "table.csv")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == ",".join(TABLE_COLUMNS)
    assert len(lines) == 1 + 8
    assert lines[1].startswith("1,1,1,53.5")
    assert lines[1].endswith(",3,1")


def test_write_table_xlsx(tmp_path, table):
    path = write_table(table, tmp_path / "table.xlsx")
    df = pd.read_excel(path, engine="openpyxl")
    assert list(df.columns) == TABLE_COLUMNS
    assert len(df) == sum(level.degeneracy for level in table)


def test_table_i_panel(table):
    lines = table_i_panel(table)
    assert len(lines) == 13
    assert "909.6" in lines[-1]
    assert "[4,5,4]/[5,4,4]" in lines[-1]


def test_trace_csv_preserves_points_and_annotations(tmp_path, model):
    sweep = SweepConfig(v_start=0.0, v_end=-0.45, direction=SweepDirection.DOWN, seed=3)
    trace = simulate_drain_sweep(model, sweep)
    path = write_trace_csv(trace, tmp_path / "trace.csv")
    loaded = read_trace_csv(path)
    assert np.allclose(loaded.voltages, trace.voltages, rtol=0, atol=1e-12)
    assert np.allclose(loaded.currents, trace.currents, rtol=1e-9, atol=1e-12)
    assert loaded.labels() == trace.labels()
    assert [a.index for a in loaded.annotations] == [a.index for a in trace.annotations]
    assert loaded.sweep.direction is SweepDirection.DOWN


def _write(tmp_path, text):
    path = tmp_path / "bad.csv"
    path.write_text(text, encoding="utf-8")
    return path


@pytest.mark.parametrize(
    "text, line",
    [
        ("v,i\n0.0,0.0\n", 1),
        ("voltage_V,current_pA,annotation\n0.0,0.0,\n0.001,abc,\n", 3),
        ("voltage_V,current_pA,annotation\n0.0,0.0,\n0.001,0.0\n", 3),
        ("voltage_V,current_pA,annotation\n0.0,0.0,\n0.001,0.0,BOGUS\n", 3),
        ("voltage_V,current_pA,annotation\n0.0,0.0,\n0.001,nan,\n", 3),
        ("voltage_V,current_pA,annotation\n0.0,0.0,\n0.002,0.0,\n0.001,0.0,\n", 4),
        ("voltage_V,current_pA,annotation\n0.0,0.0,\n\n0.002,0.0,\n0.001,0.0,\n", 5),
        ("voltage_V,current_pA,annotation\n0.0,0.0,\n0.0,0.0,\n0.001,0.0,\n", 3),
    ],
)
def test_malformed_trace_names_line(tmp_path, text, line):
    with pytest.raises(TraceFormatError, match=f"line {line}:") as info:
        read_trace_csv(_write(tmp_path, text))
    assert info.value.line == line


def test_read_trace_labels(tmp_path):
    text = "voltage_V,current_pA,annotation\n0.0,0.0,\n0.001,1.5,THRESHOLD|MODE_2E\n"
    trace = read_trace_csv(_write(tmp_path, text))
    assert trace.labels_at(1) == [TraceLabel.THRESHOLD, TraceLabel.MODE_2E]


def test_zigzag_csv(tmp_path):
    path = write_zigzag_csv(zigzag_noise(MechanicalParams(), 10, seed=0), tmp_path / "zz.csv")
    df = pd.read_csv(path)
    assert list(df.columns) == ["sample_index", "current_pA"]
    assert len(df) == 10


def test_peak_report_outputs(tmp_path, quiet_model):
    trace = simulate_drain_sweep(quiet_model, SweepConfig(v_start=0.0, v_end=0.5))
    report = build_peak_report(trace)
    path = write_peak_report(report, tmp_path / "report.csv")
    df = pd.read_csv(path)
    assert list(df.columns) == ["peak_V", "height_pA", "candidate_states"]
    assert len(df) == len(report.peaks)
    summary = format_peak_summary(report)
    assert "threshold state:" in summary
    assert "[3,2,2]" in summary
