"""
Exportación de tablas, trazas y reportes (CSV / XLSX / texto) y lectura de trazas.

Formatos:
  - tabla de estados: nx,ny,nz,energy_meV,occupation_N,degeneracy
  - traza: voltage_V,current_pA,annotation (etiquetas unidas con '|')
  - ruido: sample_index,current_pA
  - reporte de picos: peak_V,height_pA,candidate_states (unidos con ';')
"""
from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
import pandas as pd

from .analysis import PeakReport
from .errors import TraceFormatError
from .logger import get_logger
from .mechanics import ZigzagSignal
from .schemas import SweepConfig, SweepDirection, SweepKind
from .spectrum import StateTable, occupation_number, table_i_states, state_energy
from .transport import Annotation, IVTrace, TraceLabel

logger = get_logger(__name__)

PathLike = Union[str, Path]

TABLE_COLUMNS = ["nx", "ny", "nz", "energy_meV", "occupation_N", "degeneracy"]
TRACE_COLUMNS = ["voltage_V", "current_pA", "annotation"]
ZIGZAG_COLUMNS = ["sample_index", "current_pA"]
REPORT_COLUMNS = ["peak_V", "height_pA", "candidate_states"]
LABEL_SEPARATOR = "|"
FLOAT_FORMAT = "%.10g"


def _ensure_parent(path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)


def table_to_frame(table: StateTable) -> pd.DataFrame:
    rows = [
        {
            "nx": s.nx,
            "ny": s.ny,
            "nz": s.nz,
            "energy_meV": round(level.energy, 4),
            "occupation_N": occupation_number(s),
            "degeneracy": level.degeneracy,
        }
        for level in table.levels
        for s in level.states
    ]
    if not rows:
        return pd.DataFrame(columns=TABLE_COLUMNS)
    return pd.DataFrame(rows, columns=TABLE_COLUMNS)


def write_table(table: StateTable, path: PathLike) -> Path:
    """Escribe la tabla en CSV, o en XLSX si la extensión es .xlsx."""
    path = Path(path)
    _ensure_parent(path)
    df = table_to_frame(table)
    if path.suffix.lower() == ".xlsx":
        with pd.ExcelWriter(path, engine="openpyxl") as writer:
            df.to_excel(writer, index=False, sheet_name="state_table")
    else:
        df.to_csv(path, index=False, float_format="%.4f", lineterminator="\n")
    logger.info(f"Tabla de estados exportada: {path} ({len(df)} filas)")
    return path


def table_i_panel(table: StateTable) -> List[str]:
    """Renglones de referencia con energía publicada y calculada."""
    lines = ["state                 published_meV  computed_meV"]
    for states, published in table_i_states():
        computed = state_energy(states[0], table.geometry)
        label = "/".join(str(s) for s in states)
        lines.append(f"{label:<21} {published:>13.1f}  {computed:>12.4f}")
    return lines


def trace_to_frame(trace: IVTrace) -> pd.DataFrame:
    labels = [""] * len(trace)
    for annotation in trace.annotations:
        current = labels[annotation.index]
        value = annotation.label.value
        labels[annotation.index] = f"{current}{LABEL_SEPARATOR}{value}" if current else value
    return pd.DataFrame(
        {
            "voltage_V": trace.voltages,
            "current_pA": trace.currents,
            "annotation": labels,
        },
        columns=TRACE_COLUMNS,
    )


def write_trace_csv(trace: IVTrace, path: PathLike) -> Path:
    path = Path(path)
    _ensure_parent(path)
    trace_to_frame(trace).to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Traza exportada: {path} ({len(trace)} puntos)")
    return path


def read_trace_csv(path: PathLike, kind: SweepKind = SweepKind.DRAIN) -> IVTrace:
    """
    Lee una traza escrita por ``write_trace_csv``.

    Raises:
        TraceFormatError: encabezado incorrecto, fila truncada, número inválido,
            etiqueta desconocida o voltajes no monótonos; el mensaje nombra la línea.
    """
    path = Path(path)
    voltages: List[float] = []
    currents: List[float] = []
    annotations: List[Annotation] = []
    line_numbers: List[int] = []
    with path.open("r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None:
            raise TraceFormatError("empty file", line=1)
        if [h.strip() for h in header] != TRACE_COLUMNS:
            raise TraceFormatError(f"expected header {','.join(TRACE_COLUMNS)}", line=1)
        for row in reader:
            line = reader.line_num
            if not row:
                continue
            if len(row) != len(TRACE_COLUMNS):
                raise TraceFormatError(f"expected {len(TRACE_COLUMNS)} fields, got {len(row)}", line=line)
            try:
                voltage = float(row[0])
                current = float(row[1])
            except ValueError:
                raise TraceFormatError(f"invalid number in {row[:2]}", line=line)
            if not (math.isfinite(voltage) and math.isfinite(current)):
                raise TraceFormatError("non-finite value", line=line)
            index = len(voltages)
            for raw in filter(None, (x.strip() for x in row[2].split(LABEL_SEPARATOR))):
                try:
                    label = TraceLabel(raw)
                except ValueError:
                    raise TraceFormatError(f"unknown annotation {raw!r}", line=line)
                annotations.append(Annotation(index=index, voltage=voltage, label=label))
            voltages.append(voltage)
            currents.append(current)
            line_numbers.append(line)

    v = np.array(voltages, dtype=float)
    diffs = np.diff(v)
    if diffs.size and not (np.all(diffs > 0) or np.all(diffs < 0)):
        first = np.sign(diffs[0])
        bad = 0 if first == 0 else int(np.flatnonzero(np.sign(diffs) != first)[0])
        # la fila culpable es la segunda del par
        raise TraceFormatError("voltages are not strictly monotone", line=line_numbers[bad + 1])

    if v.size:
        direction = SweepDirection.DOWN if diffs.size and diffs[0] < 0 else SweepDirection.UP
        step = float(np.median(np.abs(diffs))) if diffs.size else 1.0
        sweep = SweepConfig(v_start=v[0], v_end=v[-1], step=step, direction=direction, kind=kind)
    else:
        sweep = SweepConfig(v_start=0.0, v_end=0.0, kind=kind)
    logger.info(f"Traza leída: {path} ({v.size} puntos)")
    return IVTrace(voltages=v, currents=np.array(currents, dtype=float), sweep=sweep, annotations=tuple(annotations))


def write_zigzag_csv(signal: ZigzagSignal, path: PathLike) -> Path:
    path = Path(path)
    _ensure_parent(path)
    df = pd.DataFrame(
        {"sample_index": np.arange(len(signal)), "current_pA": signal.samples},
        columns=ZIGZAG_COLUMNS,
    )
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def report_to_frame(report: PeakReport) -> pd.DataFrame:
    candidates = report.candidates_by_peak
    rows = [
        {
            "peak_V": peak.voltage,
            "height_pA": peak.height,
            "candidate_states": ";".join(level.label for level in candidates.get(i, ())),
        }
        for i, peak in enumerate(report.peaks)
    ]
    if not rows:
        return pd.DataFrame(columns=REPORT_COLUMNS)
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def write_peak_report(report: PeakReport, path: PathLike) -> Path:
    path = Path(path)
    _ensure_parent(path)
    report_to_frame(report).to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Reporte de picos exportado: {path} ({len(report.peaks)} picos)")
    return path


def _fmt(value: Optional[float], unit: str, digits: int = 4) -> str:
    if value is None:
        return "n/a"
    return f"{value:.{digits}g} {unit}".strip()


def format_peak_summary(report: PeakReport) -> str:
    """Bloque de texto plano con el resumen del análisis."""
    lines = [
        "== Peak report ==",
        f"kind: {report.kind.value}",
        f"peaks: {len(report.peaks)}",
        f"threshold: {_fmt(report.threshold_V, 'V', 5)}",
        f"median spacing: {_fmt(report.median_spacing, 'V', 5)}",
        f"E_c estimate: {_fmt(report.Ec_estimate, 'meV', 5)}",
    ]
    if report.gate is not None:
        lines.append(f"gate period: {_fmt(report.gate.period, 'V', 5)}")
        lines.append(f"alpha = {report.gate.alpha:.4f}")
        lines.append(f"C_g = {report.gate.Cg:.4f} aF")
    candidates = report.candidates_by_peak
    if report.threshold_V is not None and candidates:
        index = next(i for i, p in enumerate(report.peaks) if p.voltage == report.threshold_V)
        first = candidates.get(index, ())
        labels = "; ".join(f"{lvl.label} ({lvl.energy:.2f} meV)" for lvl in first) or "none within tol"
        lines.append(f"threshold state: {labels}")
    lines.extend(f"note: {note}" for note in report.notes)
    return "\n".join(lines)
