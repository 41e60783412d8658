"""
Extracción de parámetros desde trazas: picos, espaciado, E_c, alpha y asignación
del estado umbral. Cierra el ciclo simular -> analizar.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.signal import find_peaks

from .electrostatics import gate_alpha_from_period
from .errors import InsufficientPeaksError, InvalidArgumentError
from .logger import get_logger
from .schemas import BoxGeometry, SweepKind
from .spectrum import EnergyLevel, StateTable, enumerate_levels, find_states_near
from .transport import NOISE_FREE_LEAD_IN, IVTrace, TraceLabel

logger = get_logger(__name__)

DEFAULT_MIN_HEIGHT = 0.2  # pA
DEFAULT_MIN_PROMINENCE = 0.1  # pA
DEFAULT_LEAD_IN = NOISE_FREE_LEAD_IN  # V before the THRESHOLD marker kept in the window
DEFAULT_TOL = 10.0  # meV


class Peak(NamedTuple):
    voltage: float  # V
    height: float  # pA


class GateEstimate(NamedTuple):
    period: float  # V
    alpha: float
    Cg: float  # aF


@dataclass(frozen=True)
class PeakReport:
    peaks: Tuple[Peak, ...]
    median_spacing: Optional[float] = None  # V
    Ec_estimate: Optional[float] = None  # meV
    assigned_states: Tuple[Tuple[int, Tuple[EnergyLevel, ...]], ...] = ()
    threshold_V: Optional[float] = None
    gate: Optional[GateEstimate] = None
    kind: SweepKind = SweepKind.DRAIN
    notes: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def candidates_by_peak(self) -> dict:
        return {index: levels for index, levels in self.assigned_states}


def signal_window(trace: IVTrace, lead_in: float = DEFAULT_LEAD_IN) -> IVTrace:
    """
    Parte de la traza a partir del marcador THRESHOLD (en |V|, misma polaridad),
    con ``lead_in`` voltios previos para que el primer pico no quede en el borde.
    Sin marcador se devuelve la traza completa.
    """
    marker = trace.first(TraceLabel.THRESHOLD)
    if marker is None or len(trace) == 0:
        return trace
    sign = -1.0 if marker.voltage < 0 else 1.0
    same_side = np.sign(trace.voltages) * sign >= 0
    keep = same_side & (np.abs(trace.voltages) >= abs(marker.voltage) - lead_in)
    position = np.cumsum(keep) - 1
    return IVTrace(
        voltages=trace.voltages[keep],
        currents=trace.currents[keep],
        sweep=trace.sweep,
        annotations=tuple(
            a._replace(index=int(position[a.index])) for a in trace.annotations if keep[a.index]
        ),
        drive_energies=None if trace.drive_energies is None else trace.drive_energies[keep],
        metadata=trace.metadata,
    )


def detect_peaks(
    trace: IVTrace,
    min_height: float = DEFAULT_MIN_HEIGHT,
    min_prominence: float = DEFAULT_MIN_PROMINENCE,
) -> List[Peak]:
    """
    Máximos locales con altura >= min_height y prominencia >= min_prominence,
    ordenados por voltaje. En mesetas se reporta la muestra central.
    """
    if len(trace) == 0:
        return []
    order = np.argsort(trace.voltages, kind="stable")
    voltages = trace.voltages[order]
    currents = trace.currents[order]
    indices, _ = find_peaks(currents, height=min_height, prominence=min_prominence)
    return [Peak(voltage=float(voltages[i]), height=float(currents[i])) for i in indices]


def median_spacing(peaks: Sequence[Peak]) -> float:
    if len(peaks) < 2:
        raise InsufficientPeaksError(f"need at least 2 peaks for a spacing, got {len(peaks)}")
    positions = np.sort(np.array([p.voltage for p in peaks]))
    return float(np.median(np.diff(positions)))


def estimate_charging_energy(peaks: Sequence[Peak]) -> float:
    """Espaciado mediano en meV (1 V <-> 1000 meV)."""
    return 1000.0 * median_spacing(peaks)


def estimate_alpha(
    gate_trace: IVTrace,
    C: float,
    min_height: float = DEFAULT_MIN_HEIGHT,
    min_prominence: float = DEFAULT_MIN_PROMINENCE,
) -> GateEstimate:
    """Periodo de compuerta por espaciado mediano y de ahí alpha y C_g."""
    peaks = detect_peaks(signal_window(gate_trace), min_height, min_prominence)
    period = median_spacing(peaks)
    coupling = gate_alpha_from_period(period, C)
    return GateEstimate(period=period, alpha=coupling.alpha, Cg=coupling.Cg)


def assign_threshold_state(V_t: float, table: StateTable, tol: float = DEFAULT_TOL) -> List[EnergyLevel]:
    """Niveles dentro de ``tol`` meV de 1000 |V_t|; CutoffError si la tabla no alcanza."""
    return find_states_near(table, 1000.0 * abs(V_t), tol)


def build_peak_report(
    trace: IVTrace,
    table: Optional[StateTable] = None,
    tol: float = DEFAULT_TOL,
    C: Optional[float] = None,
    min_height: float = DEFAULT_MIN_HEIGHT,
    min_prominence: float = DEFAULT_MIN_PROMINENCE,
    lead_in: float = DEFAULT_LEAD_IN,
) -> PeakReport:
    """
    Reporte completo de una traza.

    Para barridos de drenador se estima E_c y se asignan estados a cada pico; para
    barridos de compuerta se estima el periodo y, si se da ``C`` (aF), alpha y C_g.
    """
    if tol <= 0:
        raise InvalidArgumentError(f"tol must be positive, got {tol}")
    kind = trace.sweep.kind
    peaks = detect_peaks(signal_window(trace, lead_in), min_height, min_prominence)
    notes: List[str] = []
    spacing = Ec = None
    if len(peaks) >= 2:
        spacing = median_spacing(peaks)
        Ec = 1000.0 * spacing
    else:
        notes.append(f"{len(peaks)} peak(s) detected: spacing not available")

    threshold_V = min((p.voltage for p in peaks), key=abs) if peaks else None

    gate = None
    assigned: List[Tuple[int, Tuple[EnergyLevel, ...]]] = []
    if kind is SweepKind.GATE:
        if spacing is not None and C is not None:
            coupling = gate_alpha_from_period(spacing, C)
            gate = GateEstimate(period=spacing, alpha=coupling.alpha, Cg=coupling.Cg)
    elif peaks:
        top = 1000.0 * max(abs(p.voltage) for p in peaks) + tol
        if table is None or table.cutoff_energy < top:
            table = enumerate_levels(table.geometry if table is not None else BoxGeometry(), top)
        for index, peak in enumerate(peaks):
            levels = assign_threshold_state(peak.voltage, table, tol)
            assigned.append((index, tuple(levels)))

    logger.info(f"Análisis: {len(peaks)} picos, E_c = {Ec if Ec is None else round(Ec, 3)} meV")
    return PeakReport(
        peaks=tuple(peaks),
        median_spacing=spacing,
        Ec_estimate=Ec,
        assigned_states=tuple(assigned),
        threshold_V=threshold_V,
        gate=gate,
        kind=kind,
        notes=tuple(notes),
    )
