"""Simulador de transporte de un electrón en una caja cuántica 3D con realimentación mecánica."""

# .env se carga antes de que el logger lea LOG_DIR / LOG_LEVEL
from . import settings  # noqa: F401

__version__ = "0.1.0"
