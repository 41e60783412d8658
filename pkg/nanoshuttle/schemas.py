from __future__ import annotations

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import constants


class SweepDirection(str, Enum):
    UP = "up"
    DOWN = "down"


class SweepKind(str, Enum):
    DRAIN = "drain_sweep"
    GATE = "gate_sweep"


class PumpMode(str, Enum):
    """Carga entregada por ciclo: e o 2e (escalera)."""

    SINGLE_E = "SINGLE_E"
    DOUBLE_E = "DOUBLE_E"


class ChannelPhase(str, Enum):
    OPEN = "OPEN"
    INTERFERING = "INTERFERING"
    CLOSED = "CLOSED"
    REOPENED = "REOPENED"


class Ladder(str, Enum):
    """Escalera de picos en polarización directa."""

    CHARGING = "charging"  # threshold + k * spacing
    QUANTUM = "quantum"  # niveles de la caja por encima del umbral


class _Params(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class BoxGeometry(_Params):
    """Caja de silicio, dimensiones en nm (8 x 8 x 3 por defecto)."""

    length_L: float = Field(8.0, gt=0)
    width_W: float = Field(8.0, gt=0)
    height_H: float = Field(3.0, gt=0)

    def scaled(self, factor: float) -> "BoxGeometry":
        return BoxGeometry(
            length_L=self.length_L * factor,
            width_W=self.width_W * factor,
            height_H=self.height_H * factor,
        )


class JunctionParams(_Params):
    face_area_A: float = Field(64.0, gt=0)  # nm², tunnel face L x H
    barrier_thickness_D: float = Field(3.0, gt=0)  # nm
    relative_permittivity: float = Field(11.7, gt=0)
    junction_resistance_R: float = Field(1e11, gt=0)  # ohm
    # capacitance entering tau = RC, in aF
    rc_capacitance: float = Field(1.0, gt=0)


class GateParams(_Params):
    alpha: float = Field(0.37, gt=0, lt=1)
    gate_capacitance_Cg: float = Field(0.83, gt=0)  # aF
    onset_Vgs: float = 1.0  # V
    period_dVgs: float = Field(0.5, gt=0)  # V


class MechanicalParams(_Params):
    spring_K: float = Field(0.16, gt=0)  # N/m
    stress_sigma: float = Field(200e9, gt=0)  # Pa, informational
    density_rho: float = Field(2.4e3, gt=0)  # kg/m³
    box_volume: float = Field(2e-25, gt=0)  # m³
    tunnel_rate_Gamma: float = Field(1e12, gt=0)  # 1/s
    charge_density_ne: float = Field(1e16, gt=0)  # 1/cm³
    noise_amplitude_dI: float = Field(3.0, ge=0)  # pA
    asymmetry: float = Field(0.3, ge=0, lt=1)
    displacement_dX: float = Field(0.3, ge=0)  # nm, quoted wall displacement


class DeviceModel(_Params):
    geometry: BoxGeometry = Field(default_factory=BoxGeometry)
    junction: JunctionParams = Field(default_factory=JunctionParams)
    gate: GateParams = Field(default_factory=GateParams)
    mech: MechanicalParams = Field(default_factory=MechanicalParams)
    peak_width_mV: float = Field(5.0, gt=0)
    peak_current_pA: Optional[float] = Field(None, gt=0)
    spacing_meV: float = Field(35.0, gt=0)
    counter_current_enabled: bool = False
    noise_enabled: bool = True
    staircase_enabled: bool = True
    ladder: Ladder = Ladder.CHARGING
    interference_threshold: float = Field(0.5, gt=0, le=1)

    @model_validator(mode="before")
    @classmethod
    def _default_peak_current(cls, data):
        # Sin valor explícito la altura de pico es e/RC de la unión
        if not isinstance(data, dict) or data.get("peak_current_pA") is not None:
            return data
        junction = data.get("junction") or JunctionParams()
        if isinstance(junction, dict):
            junction = JunctionParams(**junction)
        tau = junction.junction_resistance_R * junction.rc_capacitance * 1e-18
        return {**data, "peak_current_pA": constants.e / tau * 1e12}

    def with_updates(self, **changes) -> "DeviceModel":
        """Copia validada con campos reemplazados."""
        data = self.model_dump()
        data.update(changes)
        if "junction" in changes and "peak_current_pA" not in changes:
            data["peak_current_pA"] = None
        return DeviceModel(**data)


class SweepConfig(_Params):
    v_start: float
    v_end: float
    step: float = Field(0.001, gt=0)
    direction: SweepDirection = SweepDirection.UP
    kind: SweepKind = SweepKind.DRAIN
    seed: int = 0
    initial_mode: Optional[PumpMode] = None

    @model_validator(mode="after")
    def _check_direction(self) -> "SweepConfig":
        if self.direction is SweepDirection.UP and self.v_end < self.v_start:
            raise ValueError(
                f"direction 'up' requires v_end >= v_start (got {self.v_start} -> {self.v_end})"
            )
        if self.direction is SweepDirection.DOWN and self.v_end > self.v_start:
            raise ValueError(
                f"direction 'down' requires v_end <= v_start (got {self.v_start} -> {self.v_end})"
            )
        return self
