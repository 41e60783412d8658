"""
Capacitancias, energía de carga, acoplamiento de compuerta y corriente limitada por RC.

Unidades de trabajo: capacitancias en aF, energías en meV, voltajes en V.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from scipy import constants

from .errors import UnphysicalParameterError
from .schemas import JunctionParams

AF = 1e-18  # F por aF


class GateCoupling(NamedTuple):
    alpha: float
    Cg: float  # aF


class RCEstimate(NamedTuple):
    tau: float  # s
    I_peak: float  # A


def junction_capacitance(p: JunctionParams) -> float:
    """C = eps_r eps_0 A / D en aF."""
    area_m2 = p.face_area_A * 1e-18
    thickness_m = p.barrier_thickness_D * 1e-9
    return p.relative_permittivity * constants.epsilon_0 * area_m2 / thickness_m / AF


def charging_energy(C: float) -> float:
    """E_c = e²/2C en meV, con C en aF."""
    if C <= 0:
        raise UnphysicalParameterError(f"capacitance must be positive, got {C} aF")
    return constants.e**2 / (2.0 * C * AF) / constants.e * 1e3


def gate_alpha_from_period(period_dVgs: float, C: float) -> GateCoupling:
    """
    Acoplamiento de compuerta a partir del periodo de oscilación.

    De e = alpha * dVgs * Cg y Cg = alpha * C sale alpha = sqrt(e / (dVgs C)).

    Raises:
        UnphysicalParameterError: si alpha resultaría >= 1
    """
    if period_dVgs <= 0 or C <= 0:
        raise UnphysicalParameterError(
            f"period and capacitance must be positive (period={period_dVgs} V, C={C} aF)"
        )
    ratio = constants.e / (period_dVgs * C * AF)
    if ratio > 1.0 or math.isclose(ratio, 1.0, rel_tol=1e-12):
        raise UnphysicalParameterError(
            f"alpha = {math.sqrt(ratio):.4f} >= 1 for period {period_dVgs} V and C = {C} aF"
        )
    alpha = math.sqrt(ratio)
    return GateCoupling(alpha=alpha, Cg=alpha * C)


def total_drive_energy(V_ds: float, V_gs: float, alpha: float) -> float:
    """e(V_ds + alpha V_gs) en meV."""
    return 1000.0 * (V_ds + alpha * V_gs)


def rc_limited_current(R: float, C: float) -> RCEstimate:
    """tau = RC e I = e / tau; R en ohm, C en faradios."""
    if R <= 0 or C <= 0:
        raise UnphysicalParameterError(f"R and C must be positive (R={R}, C={C})")
    tau = R * C
    return RCEstimate(tau=tau, I_peak=constants.e / tau)
