"""
Sintetizador fenomenológico de curvas I-V.

Arma barridos de drenador (directo con V > 0, inverso con V < 0) y de compuerta a
partir del espectro de la caja, la electrostática y el ruido mecánico:

- picos de Coulomb gaussianos desde el umbral [3,2,2], separados por E_c
- escalera e -> 2e en [5,4,4] con histéresis de bajada en [4,4,4]
- en inverso: secuencia de ocho estados modulada por interferencia, picos
  satélite desde [4,4,1], canal cerrado entre [4,4,2] y [5,4,2] y picos anchos
  al reabrir
- ruido zig-zag por debajo del umbral

La energía de excitación es 1000 |V| meV (factor de división de bias 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from .electrostatics import total_drive_energy
from .errors import SweepConfigError
from .logger import get_logger
from .mechanics import zigzag_noise
from .schemas import (
    ChannelPhase,
    DeviceModel,
    Ladder,
    PumpMode,
    SweepConfig,
    SweepDirection,
    SweepKind,
)
from .spectrum import (
    QuantumState,
    StateTable,
    enumerate_levels,
    find_states_near,
    state_energy,
)

logger = get_logger(__name__)

FORWARD_THRESHOLD_STATE = QuantumState(3, 2, 2)
STAIRCASE_UP_STATE = QuantumState(5, 4, 4)
STAIRCASE_DOWN_STATE = QuantumState(4, 4, 4)
COUNTER_CURRENT_STATES = (QuantumState(1, 2, 2), QuantumState(2, 2, 2))

REVERSE_SEQUENCE: Tuple[QuantumState, ...] = (
    QuantumState(3, 2, 1),
    QuantumState(4, 2, 1),
    QuantumState(4, 3, 1),
    QuantumState(5, 2, 1),
    QuantumState(4, 4, 1),
    QuantumState(6, 1, 1),
    QuantumState(6, 2, 1),
    QuantumState(6, 3, 1),
)
SATELLITE_STATE = QuantumState(4, 4, 1)
CLOSURE_STATE = QuantumState(4, 4, 2)
REOPENING_STATE = QuantumState(5, 4, 2)

# altura del pico [4,4,2] relativa al primer pico inverso
CLOSURE_HEIGHT_RATIO = 0.1
# la región de ruido termina tantos anchos de pico antes del umbral
NOISE_GUARD_WIDTHS = 3.0
# tramo previo al umbral que el análisis conserva; nunca lleva ruido
NOISE_FREE_LEAD_IN = 0.015  # V
# extensión de las colas gaussianas que se evalúan
TAIL_WIDTHS = 6.0
STATE_MATCH_TOL_MEV = 10.0


class TraceLabel(str, Enum):
    THRESHOLD = "THRESHOLD"
    MODE_2E = "MODE_2E"
    MODE_1E = "MODE_1E"
    PHASE_INTERFERING = "PHASE_INTERFERING"
    PHASE_CLOSED = "PHASE_CLOSED"
    PHASE_REOPENED = "PHASE_REOPENED"
    SATELLITE_ONSET = "SATELLITE_ONSET"


class Annotation(NamedTuple):
    index: int
    voltage: float
    label: TraceLabel


class ReverseMarkers(NamedTuple):
    threshold: float
    interference_onset: float
    satellite_onset: float
    closure: float
    reopening: float


@dataclass(frozen=True, eq=False)
class IVTrace:
    voltages: np.ndarray  # V, in sweep order
    currents: np.ndarray  # pA
    sweep: SweepConfig
    annotations: Tuple[Annotation, ...] = ()
    drive_energies: Optional[np.ndarray] = None  # meV, gate sweeps only
    metadata: Dict[str, object] = field(default_factory=dict)

    def __len__(self) -> int:
        return int(self.voltages.size)

    @property
    def points(self) -> List[Tuple[float, float]]:
        return list(zip(self.voltages.tolist(), self.currents.tolist()))

    def labels(self) -> List[TraceLabel]:
        return [a.label for a in self.annotations]

    def first(self, label: TraceLabel) -> Optional[Annotation]:
        for annotation in self.annotations:
            if annotation.label is label:
                return annotation
        return None

    def labels_at(self, index: int) -> List[TraceLabel]:
        return [a.label for a in self.annotations if a.index == index]


def gaussian(x: np.ndarray, center: float, width: float) -> np.ndarray:
    return np.exp(-0.5 * ((x - center) / width) ** 2)


def noise_guard(width: float, lead_in: float) -> float:
    """Distancia bajo el umbral sin ruido: la mayor entre 3 anchos de pico y ``lead_in``."""
    return max(NOISE_GUARD_WIDTHS * width, lead_in)


def sweep_voltages(sweep: SweepConfig) -> np.ndarray:
    """
    Rejilla de voltajes en el orden del barrido.

    Se redondea a 1e-12 V para que un barrido de subida y uno de bajada sobre el
    mismo rango muestreen exactamente los mismos voltajes.
    """
    if sweep.v_start == sweep.v_end:
        return np.empty(0)
    n = int(math.floor(abs(sweep.v_end - sweep.v_start) / sweep.step + 1e-9)) + 1
    sign = 1.0 if sweep.direction is SweepDirection.UP else -1.0
    return np.round(sweep.v_start + sign * sweep.step * np.arange(n), 12)


def forward_threshold(model: DeviceModel) -> float:
    return state_energy(FORWARD_THRESHOLD_STATE, model.geometry)


def forward_peak_energies(
    model: DeviceModel, max_energy: float, table: Optional[StateTable] = None
) -> List[float]:
    """
    Centros de los picos en directo hasta ``max_energy`` (meV).

    Con la escalera de carga: umbral + k * spacing. Con la escalera cuántica: los
    niveles de la caja desde el umbral.
    """
    threshold = forward_threshold(model)
    if max_energy < threshold:
        return []
    if model.ladder is Ladder.QUANTUM:
        if table is None or table.cutoff_energy < max_energy:
            table = enumerate_levels(model.geometry, max_energy)
        return [lvl.energy for lvl in table.levels if threshold - 1e-9 <= lvl.energy <= max_energy]
    count = int(math.floor((max_energy - threshold) / model.spacing_meV + 1e-9)) + 1
    return [threshold + k * model.spacing_meV for k in range(count)]


def reverse_peak_energies(model: DeviceModel) -> List[Tuple[float, QuantumState]]:
    """Los ocho primeros picos en inverso con su energía."""
    return [(state_energy(s, model.geometry), s) for s in REVERSE_SEQUENCE]


def interference_modulation(state: QuantumState) -> float:
    """1 / (1 + |nx - ny| / 2): vale 1 para nx == ny y decrece con el desbalance."""
    return 1.0 / (1.0 + abs(state.nx - state.ny) / 2.0)


def reverse_markers(model: DeviceModel) -> ReverseMarkers:
    geom = model.geometry
    peaks = reverse_peak_energies(model)
    onset = next(
        (e for e, s in peaks if interference_modulation(s) < model.interference_threshold),
        state_energy(SATELLITE_STATE, geom),
    )
    return ReverseMarkers(
        threshold=peaks[0][0],
        interference_onset=onset,
        satellite_onset=state_energy(SATELLITE_STATE, geom),
        closure=state_energy(CLOSURE_STATE, geom),
        reopening=state_energy(REOPENING_STATE, geom),
    )


def channel_phase(energy: float, model: DeviceModel) -> ChannelPhase:
    """Fase del canal inverso; monótona en la energía."""
    markers = reverse_markers(model)
    if energy >= markers.reopening:
        return ChannelPhase.REOPENED
    if energy > markers.closure:
        return ChannelPhase.CLOSED
    if energy >= markers.interference_onset:
        return ChannelPhase.INTERFERING
    return ChannelPhase.OPEN


def hysteresis_step(
    mode: PumpMode, direction: SweepDirection, energy: float, table: StateTable
) -> PumpMode:
    """
    Transición de la escalera: sube a 2e al cruzar [5,4,4] subiendo y baja a e
    solo al cruzar [4,4,4] bajando; entre ambos estados el modo se conserva.
    """
    if energy < 0:
        raise ValueError(f"energy must be non-negative, got {energy}")
    if mode is PumpMode.SINGLE_E and direction is SweepDirection.UP:
        if energy >= table.level_of(STAIRCASE_UP_STATE).energy:
            return PumpMode.DOUBLE_E
    elif mode is PumpMode.DOUBLE_E and direction is SweepDirection.DOWN:
        if energy < table.level_of(STAIRCASE_DOWN_STATE).energy:
            return PumpMode.SINGLE_E
    return mode


def _forward_current(model: DeviceModel, energies: np.ndarray, table: StateTable) -> np.ndarray:
    width = model.peak_width_mV
    current = np.zeros_like(energies)
    if energies.size == 0:
        return current
    for center in forward_peak_energies(model, float(energies.max()) + TAIL_WIDTHS * width, table):
        current += model.peak_current_pA * gaussian(energies, center, width)
    if model.counter_current_enabled:
        # dip between [1,2,2] and the [2,2,2] release
        lo, hi = (state_energy(s, model.geometry) for s in COUNTER_CURRENT_STATES)
        current -= model.peak_current_pA * gaussian(energies, 0.5 * (lo + hi), width)
    return current


def _reverse_envelope(energy: float, markers: ReverseMarkers) -> float:
    # linear decay so that the [4,4,2] height is CLOSURE_HEIGHT_RATIO of the first peak
    span = markers.closure - markers.threshold
    fraction = (energy - markers.threshold) / span
    return max(CLOSURE_HEIGHT_RATIO, 1.0 - (1.0 - CLOSURE_HEIGHT_RATIO) * fraction)


def _reverse_current(model: DeviceModel, energies: np.ndarray) -> np.ndarray:
    width = model.peak_width_mV
    height = model.peak_current_pA
    markers = reverse_markers(model)
    current = np.zeros_like(energies)
    if energies.size == 0:
        return current

    peaks = reverse_peak_energies(model)
    for center, state in peaks:
        amplitude = height * _reverse_envelope(center, markers) * interference_modulation(state)
        current += amplitude * gaussian(energies, center, width)

    # satellites at the midpoints from [4,4,1] up to the closure
    anchors = [e for e, _ in peaks if e >= markers.satellite_onset] + [markers.closure]
    for lo, hi in zip(anchors, anchors[1:]):
        middle = 0.5 * (lo + hi)
        amplitude = 0.5 * height * _reverse_envelope(middle, markers)
        current += amplitude * gaussian(energies, middle, 0.5 * width)

    # broader peaks after reopening
    top = float(energies.max()) + TAIL_WIDTHS * 2.0 * width
    center = markers.reopening
    while center <= top:
        current += height * gaussian(energies, center, 2.0 * width)
        center += model.spacing_meV

    closed = (energies > markers.closure) & (energies < markers.reopening)
    current[closed] = 0.0
    return current


def _noise(model: DeviceModel, voltages: np.ndarray, seed: int) -> np.ndarray:
    """Ruido zig-zag indexado por la posición ascendente en la rejilla."""
    if not model.noise_enabled or model.mech.noise_amplitude_dI == 0 or voltages.size == 0:
        return np.zeros_like(voltages)
    samples = zigzag_noise(model.mech, voltages.size, seed).samples
    order = np.argsort(voltages, kind="stable")
    noise = np.empty_like(samples)
    noise[order] = samples
    return noise


def _annotate_crossing(
    energies: np.ndarray,
    mask: np.ndarray,
    marker: float,
    label: TraceLabel,
    voltages: np.ndarray,
    strict: bool = False,
) -> Optional[Annotation]:
    """Marca la muestra de menor energía por encima del marcador si el barrido lo cruza."""
    subset = np.flatnonzero(mask)
    if subset.size == 0:
        return None
    values = energies[subset]
    above = values > marker if strict else values >= marker
    if not above.any() or values.min() > marker:
        return None
    candidates = subset[above]
    index = int(candidates[np.argmin(energies[candidates])])
    return Annotation(index=index, voltage=float(voltages[index]), label=label)


def _initial_mode(model: DeviceModel, sweep: SweepConfig, voltages: np.ndarray, table: StateTable) -> PumpMode:
    if sweep.initial_mode is not None:
        return sweep.initial_mode
    if not model.staircase_enabled or voltages[0] < 0:
        return PumpMode.SINGLE_E
    if 1000.0 * voltages[0] >= table.level_of(STAIRCASE_UP_STATE).energy:
        return PumpMode.DOUBLE_E
    return PumpMode.SINGLE_E


def simulate_drain_sweep(model: DeviceModel, sweep: SweepConfig) -> IVTrace:
    """
    Barrido de drenador determinista por (modelo, barrido).

    Raises:
        SweepConfigError: si el barrido no es de drenador
    """
    if sweep.kind is not SweepKind.DRAIN:
        raise SweepConfigError(f"simulate_drain_sweep needs a drain sweep, got {sweep.kind.value}")

    voltages = sweep_voltages(sweep)
    if voltages.size == 0:
        return IVTrace(voltages=voltages, currents=np.empty(0), sweep=sweep)

    energies = 1000.0 * np.abs(voltages)
    forward = voltages >= 0
    reverse = ~forward
    up_energy = state_energy(STAIRCASE_UP_STATE, model.geometry)
    cutoff = max(float(energies.max()) + TAIL_WIDTHS * model.peak_width_mV, up_energy) + 1.0
    table = enumerate_levels(model.geometry, cutoff)

    currents = np.zeros_like(energies)
    currents[forward] = _forward_current(model, energies[forward], table)
    currents[reverse] = _reverse_current(model, energies[reverse])

    # staircase multiplier follows the sweep order
    annotations: List[Annotation] = []
    mode = _initial_mode(model, sweep, voltages, table)
    multiplier = np.ones_like(energies)
    for i, v in enumerate(voltages):
        if v < 0 or not model.staircase_enabled:
            continue
        rising = sweep.direction is SweepDirection.UP
        new_mode = hysteresis_step(
            mode, SweepDirection.UP if rising else SweepDirection.DOWN, float(energies[i]), table
        )
        if new_mode is not mode:
            label = TraceLabel.MODE_2E if new_mode is PumpMode.DOUBLE_E else TraceLabel.MODE_1E
            annotations.append(Annotation(index=i, voltage=float(v), label=label))
            mode = new_mode
        if mode is PumpMode.DOUBLE_E:
            multiplier[i] = 2.0
    currents *= multiplier

    threshold = forward_threshold(model)
    markers = reverse_markers(model)
    guard = noise_guard(model.peak_width_mV, 1000.0 * NOISE_FREE_LEAD_IN)
    noisy = (forward & (energies < threshold - guard)) | (reverse & (energies < markers.threshold - guard))
    currents = currents + np.where(noisy, _noise(model, voltages, sweep.seed), 0.0)

    crossings = [
        (forward, threshold, TraceLabel.THRESHOLD, False),
        (reverse, markers.threshold, TraceLabel.THRESHOLD, False),
        (reverse, markers.interference_onset, TraceLabel.PHASE_INTERFERING, False),
        (reverse, markers.satellite_onset, TraceLabel.SATELLITE_ONSET, False),
        (reverse, markers.closure, TraceLabel.PHASE_CLOSED, True),
        (reverse, markers.reopening, TraceLabel.PHASE_REOPENED, False),
    ]
    for mask, marker, label, strict in crossings:
        annotation = _annotate_crossing(energies, mask, marker, label, voltages, strict)
        if annotation is not None:
            annotations.append(annotation)
    annotations.sort(key=lambda a: (a.index, a.label.value))

    for annotation in annotations:
        logger.debug(f"{annotation.label.value} en {annotation.voltage:.4f} V")
    logger.info(
        f"Barrido de drenador: {voltages.size} puntos, {sweep.direction.value}, semilla {sweep.seed}, "
        f"{len(annotations)} anotaciones"
    )
    return IVTrace(
        voltages=voltages,
        currents=currents,
        sweep=sweep,
        annotations=tuple(annotations),
        metadata={"threshold_meV": threshold},
    )


def gate_peak_voltages(model: DeviceModel, v_max: float) -> List[float]:
    gate = model.gate
    if v_max < gate.onset_Vgs:
        return []
    count = int(math.floor((v_max - gate.onset_Vgs) / gate.period_dVgs + 1e-9)) + 1
    return [gate.onset_Vgs + k * gate.period_dVgs for k in range(count)]


def gate_peak_width(model: DeviceModel) -> float:
    """Ancho en V_gs: el ancho en drenador escalado por periodo / espaciado."""
    return model.peak_width_mV * model.gate.period_dVgs / model.spacing_meV


def simulate_gate_sweep(model: DeviceModel, sweep: SweepConfig, V_ds: float) -> IVTrace:
    """
    Barrido de compuerta a V_ds fijo: picos en onset + k * periodo y ruido zig-zag
    antes del inicio de la carga.
    """
    if sweep.kind is not SweepKind.GATE:
        raise SweepConfigError(f"simulate_gate_sweep needs a gate sweep, got {sweep.kind.value}")

    voltages = sweep_voltages(sweep)
    if voltages.size == 0:
        return IVTrace(voltages=voltages, currents=np.empty(0), sweep=sweep, drive_energies=np.empty(0))

    gate = model.gate
    width = gate_peak_width(model)
    currents = np.zeros_like(voltages)
    for center in gate_peak_voltages(model, float(voltages.max()) + TAIL_WIDTHS * width):
        currents += model.peak_current_pA * gaussian(voltages, center, width)

    noisy = voltages < gate.onset_Vgs - noise_guard(width, NOISE_FREE_LEAD_IN)
    currents = currents + np.where(noisy, _noise(model, voltages, sweep.seed), 0.0)

    drive = total_drive_energy(V_ds, voltages, gate.alpha)

    annotations: List[Annotation] = []
    onset = _annotate_crossing(
        voltages, np.ones_like(voltages, dtype=bool), gate.onset_Vgs, TraceLabel.THRESHOLD, voltages
    )
    metadata: Dict[str, object] = {"V_ds": V_ds}
    if onset is not None:
        annotations.append(onset)
        onset_energy = total_drive_energy(V_ds, gate.onset_Vgs, gate.alpha)
        metadata["onset_drive_energy_meV"] = onset_energy
        if onset_energy > 0:
            table = enumerate_levels(model.geometry, onset_energy + STATE_MATCH_TOL_MEV)
            matches = find_states_near(table, onset_energy, STATE_MATCH_TOL_MEV)
            if matches:
                metadata["onset_state"] = matches[0].label

    logger.info(
        f"Barrido de compuerta: {voltages.size} puntos, V_ds = {V_ds} V, semilla {sweep.seed}"
    )
    return IVTrace(
        voltages=voltages,
        currents=currents,
        sweep=sweep,
        annotations=tuple(annotations),
        drive_energies=drive,
        metadata=metadata,
    )


def simulate(model: DeviceModel, sweep: SweepConfig, V_ds: float = 0.05) -> IVTrace:
    if sweep.kind is SweepKind.GATE:
        return simulate_gate_sweep(model, sweep, V_ds)
    return simulate_drain_sweep(model, sweep)
