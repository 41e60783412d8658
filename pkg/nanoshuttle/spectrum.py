"""
Niveles de una partícula en la caja 3D de paredes rígidas.

E(nx, ny, nz) = (pi² hbar² / 2m) (nx²/L² + ny²/W² + nz²/H²) con la masa del
electrón libre; es la elección que reproduce la tabla publicada de la caja
8 x 8 x 3 nm³ dentro de 0.3 meV.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from scipy import constants

from .errors import CutoffError, InvalidArgumentError
from .logger import get_logger
from .schemas import BoxGeometry

logger = get_logger(__name__)

# pi² hbar² / 2 m_e en meV·nm² (~376.03), derivado de CODATA
CONFINEMENT_MEV_NM2 = (
    constants.pi**2 * constants.hbar**2 / (2.0 * constants.m_e) / constants.e * 1e3 * 1e18
)

DEGENERACY_TOL_MEV = 1e-9


@dataclass(frozen=True, order=True)
class QuantumState:
    nx: int
    ny: int
    nz: int

    def __post_init__(self):
        for name in ("nx", "ny", "nz"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")

    @classmethod
    def of(cls, triple: Sequence[int]) -> "QuantumState":
        nx, ny, nz = triple
        return cls(int(nx), int(ny), int(nz))

    @classmethod
    def parse(cls, text: str) -> "QuantumState":
        """Acepta '[3,2,2]' o '3,2,2'."""
        parts = text.strip().strip("[]").split(",")
        if len(parts) != 3:
            raise ValueError(f"not a quantum state: {text!r}")
        return cls.of([int(p) for p in parts])

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.nx, self.ny, self.nz)

    def __str__(self) -> str:
        return f"[{self.nx},{self.ny},{self.nz}]"


@dataclass(frozen=True)
class EnergyLevel:
    states: Tuple[QuantumState, ...]
    energy: float  # meV

    def __post_init__(self):
        if not self.states:
            raise ValueError("an energy level needs at least one state")

    @property
    def degeneracy(self) -> int:
        return len(self.states)

    @property
    def occupation_numbers(self) -> Tuple[int, ...]:
        return tuple(occupation_number(s) for s in self.states)

    @property
    def occupation_N(self) -> Optional[int]:
        """N compartido por todos los miembros; None si el nivel mezcla N (degeneración accidental)."""
        values = set(self.occupation_numbers)
        return values.pop() if len(values) == 1 else None

    @property
    def label(self) -> str:
        return "/".join(str(s) for s in self.states)

    def __contains__(self, state: object) -> bool:
        return state in self.states


@dataclass(frozen=True)
class StateTable:
    levels: Tuple[EnergyLevel, ...]
    cutoff_energy: float  # meV
    geometry: BoxGeometry

    def __len__(self) -> int:
        return len(self.levels)

    def __iter__(self) -> Iterator[EnergyLevel]:
        return iter(self.levels)

    def states(self) -> Iterator[QuantumState]:
        for level in self.levels:
            yield from level.states

    def level_of(self, state: QuantumState) -> EnergyLevel:
        """Nivel que contiene ``state``; CutoffError si queda por encima del corte."""
        energy = state_energy(state, self.geometry)
        if energy > self.cutoff_energy:
            raise CutoffError(
                f"state {state} at {energy:.3f} meV is above the table cutoff "
                f"{self.cutoff_energy:.3f} meV; re-enumerate with a higher cutoff"
            )
        for level in self.levels:
            if state in level:
                return level
        raise CutoffError(f"state {state} not found in table")  # pragma: no cover


def state_energy(state: QuantumState, geom: BoxGeometry) -> float:
    """Energía del estado en meV."""
    x = (state.nx * state.nx) / (geom.length_L * geom.length_L)
    y = (state.ny * state.ny) / (geom.width_W * geom.width_W)
    z = (state.nz * state.nz) / (geom.height_H * geom.height_H)
    # (x + y) first: with L == W the permutation partners give the same bits
    return CONFINEMENT_MEV_NM2 * ((x + y) + z)


def axis_bound(dimension: float, cutoff: float) -> int:
    return math.ceil(dimension * math.sqrt(cutoff / CONFINEMENT_MEV_NM2)) + 1


def enumerate_levels(geom: BoxGeometry, cutoff: float) -> StateTable:
    """
    Escalera completa de niveles hasta ``cutoff`` (meV).

    Los estados con la misma energía (dentro de 1e-9 meV) se agrupan en un
    solo EnergyLevel. Un corte por debajo del fundamental da una tabla vacía.
    """
    if cutoff <= 0:
        raise InvalidArgumentError(f"cutoff must be positive, got {cutoff}")

    bounds = [axis_bound(d, cutoff) for d in (geom.length_L, geom.width_W, geom.height_H)]
    found: List[Tuple[float, QuantumState]] = []
    for nx, ny, nz in product(*(range(1, b + 1) for b in bounds)):
        state = QuantumState(nx, ny, nz)
        energy = state_energy(state, geom)
        if energy <= cutoff:
            found.append((energy, state))
    found.sort(key=lambda item: (item[0], item[1].as_tuple()))

    levels: List[EnergyLevel] = []
    group: List[Tuple[float, QuantumState]] = []
    for energy, state in found:
        if group and energy - group[0][0] >= DEGENERACY_TOL_MEV:
            levels.append(EnergyLevel(tuple(s for _, s in group), group[0][0]))
            group = []
        group.append((energy, state))
    if group:
        levels.append(EnergyLevel(tuple(s for _, s in group), group[0][0]))

    logger.debug(f"Tabla enumerada: {len(found)} estados, {len(levels)} niveles hasta {cutoff} meV")
    return StateTable(levels=tuple(levels), cutoff_energy=float(cutoff), geometry=geom)


def find_states_near(table: StateTable, target: float, tol: float) -> List[EnergyLevel]:
    """Niveles con |E - target| <= tol, el más cercano primero."""
    if tol <= 0:
        raise InvalidArgumentError(f"tol must be positive, got {tol}")
    if target > table.cutoff_energy:
        raise CutoffError(
            f"target {target:.3f} meV is above the table cutoff {table.cutoff_energy:.3f} meV; "
            "re-enumerate with a higher cutoff"
        )
    near = [level for level in table.levels if abs(level.energy - target) <= tol]
    return sorted(near, key=lambda level: (abs(level.energy - target), level.energy))


def occupation_number(state: QuantumState) -> int:
    return state.nx + state.ny + state.nz


def level_gap(table: StateTable, upper: QuantumState, lower: QuantumState) -> float:
    return table.level_of(upper).energy - table.level_of(lower).energy


def degeneracy(level: EnergyLevel) -> int:
    return level.degeneracy


def is_equal_partition(state: QuantumState) -> bool:
    return state.nx == state.ny == state.nz


def magic_states(table: StateTable, n: int) -> List[EnergyLevel]:
    """Niveles con algún miembro de ocupación ``n`` (7 y 13 dan corriente cuantizada)."""
    return [level for level in table.levels if n in level.occupation_numbers]


# Estados de la tabla publicada y su energía en meV
REFERENCE_LEVELS: Dict[Tuple[Tuple[int, int, int], ...], float] = {
    ((1, 1, 1),): 53.5,
    ((2, 3, 1), (3, 2, 1)): 118.2,
    ((2, 2, 2),): 214.2,
    ((2, 3, 2), (3, 2, 2)): 243.6,
    ((4, 4, 4),): 856.7,
    ((4, 5, 4), (5, 4, 4)): 909.6,
    ((2, 4, 1), (4, 2, 1)): 159.3,
    ((3, 4, 1), (4, 3, 1)): 188.7,
    ((2, 5, 1), (5, 2, 1)): 212.2,
    ((4, 4, 2),): 355.2,
    ((4, 5, 2), (5, 4, 2)): 408.1,
    ((2, 2, 3),): 423.1,
}


def table_i_states() -> List[Tuple[Tuple[QuantumState, ...], float]]:
    """Los 12 renglones de referencia, ordenados por energía publicada."""
    rows = [
        (tuple(QuantumState.of(t) for t in triples), published)
        for triples, published in REFERENCE_LEVELS.items()
    ]
    return sorted(rows, key=lambda row: row[1])
