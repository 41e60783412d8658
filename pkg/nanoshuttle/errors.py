"""Excepciones del simulador.

Cada clase deriva también de ``ValueError`` para que el código que ya atrapa
errores de valor siga funcionando; la CLI convierte cualquier
``NanoshuttleError`` en código de salida 2.
"""
from __future__ import annotations


class NanoshuttleError(Exception):
    """Base de todos los errores de entrada del usuario."""


class CutoffError(NanoshuttleError, ValueError):
    """La energía o el estado pedido está por encima del corte de la tabla."""


class UnphysicalParameterError(NanoshuttleError, ValueError):
    """Los parámetros producen un resultado sin sentido físico."""


class InsufficientPeaksError(NanoshuttleError, ValueError):
    """Hacen falta al menos dos picos para una estadística de espaciado."""


class SweepConfigError(NanoshuttleError, ValueError):
    """Barrido inconsistente (dirección, paso o tipo)."""


class ConfigError(NanoshuttleError, ValueError):
    """Clave desconocida o valor inválido en el archivo de dispositivo."""


class TraceFormatError(NanoshuttleError, ValueError):
    """CSV de traza mal formado; el mensaje nombra la línea."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidArgumentError(NanoshuttleError, ValueError):
    """Argumento numérico fuera de su dominio (corte, tolerancia, semilla)."""
