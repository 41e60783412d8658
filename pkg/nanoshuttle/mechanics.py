"""
Aritmética del oscilador electromecánico y ruido zig-zag bajo el umbral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy import constants

from .errors import UnphysicalParameterError
from .logger import get_logger
from .schemas import MechanicalParams

logger = get_logger(__name__)

# Punto de calibración K = sigma * A: (200 GPa, 64 nm²) -> 0.16 N/m
REFERENCE_SIGMA = 200e9
REFERENCE_AREA = 64.0
REFERENCE_K = 0.16

# modo de la caja completa respecto de omega_0
NET_MODE_FACTOR = 59.0

STRONG_COUPLING = 0.5


class Coupling(str, Enum):
    WEAK = "WEAK"
    STRONG = "STRONG"


class Frequencies(NamedTuple):
    omega0: float  # 1/s
    omega_net: float  # 1/s


class CouplingBudget(NamedTuple):
    dEe: float  # meV
    lam: float


@dataclass(frozen=True, eq=False)
class ZigzagSignal:
    samples: np.ndarray  # pA
    seed: int

    @property
    def mean(self) -> float:
        return float(self.samples.mean()) if self.samples.size else 0.0

    def __len__(self) -> int:
        return int(self.samples.size)


def spring_constant(sigma: float, area_A: float) -> float:
    """K lineal en sigma y A, calibrado para que (200e9 Pa, 64 nm²) dé 0.16 N/m."""
    if sigma <= 0 or area_A <= 0:
        raise UnphysicalParameterError(f"sigma and area must be positive (sigma={sigma}, A={area_A})")
    return REFERENCE_K * (sigma / REFERENCE_SIGMA) * (area_A / REFERENCE_AREA)


def mechanical_work(K: float, dX: float) -> float:
    """K dX²/2 en meV, dX en nm."""
    if K <= 0 or dX < 0:
        raise UnphysicalParameterError(f"need K > 0 and dX >= 0 (K={K}, dX={dX})")
    dx_m = dX * 1e-9
    return 0.5 * K * dx_m * dx_m / constants.e * 1e3


def _affected_charge_rate(area_A: float, ne: float, Gamma: float, third_volume: bool) -> float:
    # e * (A/3?) * n_e * Gamma en A/m: corriente por metro de desplazamiento
    area_m2 = area_A * 1e-18
    if third_volume:
        area_m2 /= 3.0
    return constants.e * area_m2 * (ne * 1e6) * Gamma


def displacement_from_noise(
    dI: float, area_A: float, ne: float, Gamma: float, third_volume: bool = False
) -> float:
    """
    Desplazamiento de pared (nm) a partir del ruido dI = e dV n_e Gamma.

    Args:
        dI: amplitud del ruido en pA
        area_A: área efectiva de túnel en nm²
        ne: densidad de carga inducida en 1/cm³
        Gamma: tasa de túnel en 1/s
        third_volume: usa dV = A dX / 3 en lugar de A dX

    Returns:
        dX en nm
    """
    if dI <= 0 or area_A <= 0 or ne <= 0 or Gamma <= 0:
        raise UnphysicalParameterError("all inputs of the noise inversion must be positive")
    return dI * 1e-12 / _affected_charge_rate(area_A, ne, Gamma, third_volume) * 1e9


def noise_from_displacement(
    dX: float, area_A: float, ne: float, Gamma: float, third_volume: bool = False
) -> float:
    """Fórmula directa dI = e dV n_e Gamma, en pA."""
    return dX * 1e-9 * _affected_charge_rate(area_A, ne, Gamma, third_volume) * 1e12


def oscillator_frequencies(K: float, rho: float, volume: float) -> Frequencies:
    if K <= 0 or rho <= 0 or volume <= 0:
        raise UnphysicalParameterError("K, rho and volume must be positive")
    omega0 = math.sqrt(K / (rho * volume))
    return Frequencies(omega0=omega0, omega_net=NET_MODE_FACTOR * omega0)


def coupling_lambda(Ec: float, dEn: float) -> CouplingBudget:
    """
    Reparte E_c entre el salto electrónico dEn y el presupuesto mecánico dEe.

    Raises:
        UnphysicalParameterError: si Ec <= dEn (no queda energía mecánica)
    """
    if not dEn > 0:
        raise UnphysicalParameterError(f"level gap must be positive, got {dEn} meV")
    if Ec <= dEn:
        raise UnphysicalParameterError(
            f"no mechanical budget: E_c = {Ec} meV does not exceed the level gap {dEn} meV"
        )
    dEe = Ec - dEn
    return CouplingBudget(dEe=dEe, lam=dEe / dEn)


def reverse_coupling_lambda(Ec: float, dEn: float, factor: float = 3.0) -> float:
    """lambda del canal inverso, donde dEe crece al menos ``factor`` veces."""
    return factor * coupling_lambda(Ec, dEn).lam


def classify_coupling(lam: float) -> Coupling:
    return Coupling.STRONG if lam >= STRONG_COUPLING else Coupling.WEAK


def feedback_ratio(dEe: float, Ee: float) -> float:
    """Fracción de la energía almacenada en el resonador que se intercambia por ciclo."""
    if Ee <= 0:
        raise UnphysicalParameterError(f"stored energy must be positive, got {Ee} meV")
    return dEe / Ee


def zigzag_noise(params: MechanicalParams, n_samples: int, seed: int) -> ZigzagSignal:
    """
    Señal zig-zag: signo alternado en cada muestra, empezando positivo.

    Las excursiones positivas valen dI (1 + asimetría), las negativas dI (1 - asimetría),
    cada una multiplicada por un factor uniforme en [0.5, 1.5) de un generador con semilla.
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    rng = np.random.default_rng(seed)
    jitter = rng.uniform(0.5, 1.5, size=n_samples)
    positive = np.arange(n_samples) % 2 == 0
    dI = params.noise_amplitude_dI
    amplitude = np.where(positive, dI * (1.0 + params.asymmetry), -dI * (1.0 - params.asymmetry))
    logger.debug(f"Ruido zig-zag: {n_samples} muestras, semilla {seed}")
    return ZigzagSignal(samples=amplitude * jitter, seed=seed)
