"""
Carga del archivo de dispositivo (INI con secciones [geometry], [junction], [gate],
[mechanics] y [transport]).

Todas las claves son opcionales; las ausentes toman el valor por defecto del
modelo. Una clave o sección desconocida es un error que la nombra.
"""
from __future__ import annotations

import configparser
from pathlib import Path
from typing import Dict, Optional, Union

from pydantic import BaseModel, ValidationError

from .errors import ConfigError
from .logger import get_logger
from .schemas import BoxGeometry, DeviceModel, GateParams, JunctionParams, MechanicalParams
from .settings import NANOSHUTTLE_CONFIG

logger = get_logger(__name__)

SECTION_MODELS: Dict[str, type] = {
    "geometry": BoxGeometry,
    "junction": JunctionParams,
    "gate": GateParams,
    "mechanics": MechanicalParams,
}
SECTION_FIELDS = {"geometry": "geometry", "junction": "junction", "gate": "gate", "mechanics": "mech"}
TRANSPORT_KEYS = {
    "peak_width_mV",
    "peak_current_pA",
    "spacing_meV",
    "counter_current_enabled",
    "noise_enabled",
    "staircase_enabled",
    "ladder",
    "interference_threshold",
}


def _raise_from_validation(section: str, exc: ValidationError) -> None:
    error = exc.errors()[0]
    key = ".".join(str(part) for part in error.get("loc", ())) or "?"
    if error.get("type") == "extra_forbidden":
        raise ConfigError(f"[{section}] unknown key '{key}'") from exc
    raise ConfigError(f"[{section}] invalid value for '{key}': {error.get('msg')}") from exc


def _build(section: str, model: type, values: Dict[str, str]) -> BaseModel:
    try:
        return model(**values)
    except ValidationError as exc:
        _raise_from_validation(section, exc)
        raise  # pragma: no cover


def parse_device_config(text: str, source: str = "<string>") -> DeviceModel:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keys keep their case (length_L, face_area_A...)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from exc

    data: Dict[str, object] = {}
    for section in parser.sections():
        values = dict(parser.items(section))
        if section in SECTION_MODELS:
            data[SECTION_FIELDS[section]] = _build(section, SECTION_MODELS[section], values)
        elif section == "transport":
            unknown = sorted(set(values) - TRANSPORT_KEYS)
            if unknown:
                raise ConfigError(f"[transport] unknown key '{unknown[0]}'")
            data.update(values)
        else:
            raise ConfigError(f"unknown section [{section}]")

    try:
        return DeviceModel(**data)
    except ValidationError as exc:
        _raise_from_validation("transport", exc)
        raise  # pragma: no cover


def load_device_config(path: Optional[Union[str, Path]] = None) -> DeviceModel:
    """
    Lee el archivo de dispositivo.

    Sin ``path`` se usa NANOSHUTTLE_CONFIG si existe; si tampoco existe se
    devuelven los valores por defecto.
    """
    if path is None:
        default = Path(NANOSHUTTLE_CONFIG)
        if not default.exists():
            logger.info("Sin archivo de dispositivo: usando valores por defecto")
            return DeviceModel()
        path = default
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read device config {path}: {exc}") from exc
    model = parse_device_config(text, source=str(path))
    logger.info(f"Archivo de dispositivo cargado: {path}")
    return model
