"""
Nanoshuttle - configuración de logging.

Un único logger de paquete (``nanoshuttle``) lleva los manejadores; los módulos
piden hijos con ``get_logger(__name__)`` y propagan hacia él. Cada registro
lleva el subcomando y la semilla de la ejecución en curso, de modo que el log
rotativo de varias corridas se puede filtrar por barrido.
"""

import logging
import logging.handlers
import os
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Union

try:
    from pythonjsonlogger import jsonlogger
    JSON_LOGGER_AVAILABLE = True
except ImportError:
    JSON_LOGGER_AVAILABLE = False

PACKAGE_LOGGER = "nanoshuttle"
_UNSET = "-"


class RunContextFilter(logging.Filter):
    """Añade ``command`` y ``seed`` de la corrida actual a cada registro."""

    def __init__(self) -> None:
        super().__init__()
        self.context: Dict[str, Any] = {"command": _UNSET, "seed": _UNSET}

    def bind(self, **fields: Any) -> None:
        for key, value in fields.items():
            self.context[key] = _UNSET if value is None else value

    def filter(self, record: logging.LogRecord) -> bool:
        for key, value in self.context.items():
            if not hasattr(record, key):
                setattr(record, key, value)
        return True


class NanoshuttleLogger:
    """Configuración centralizada; se instancia una sola vez por proceso."""

    _instance: Optional['NanoshuttleLogger'] = None
    _initialized: bool = False

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if not self._initialized:
            self.log_dir = Path(os.getenv("LOG_DIR", "logs"))
            self.log_dir.mkdir(parents=True, exist_ok=True)
            self.log_level = os.getenv("LOG_LEVEL", "INFO").upper()
            self.console_level = os.getenv("LOG_CONSOLE_LEVEL", "WARNING").upper()
            self.log_format = os.getenv("LOG_FORMAT", "standard")
            self.run_context = RunContextFilter()
            self._root: Optional[logging.Logger] = None
            self._initialized = True

    @property
    def root(self) -> logging.Logger:
        if self._root is None:
            self._root = self._configure_package_logger()
        return self._root

    def _configure_package_logger(self) -> logging.Logger:
        logger = logging.getLogger(PACKAGE_LOGGER)
        logger.setLevel(getattr(logging, self.log_level))
        logger.handlers.clear()

        # stdout lleva la salida de los comandos
        console = logging.StreamHandler(sys.stderr)
        console.setLevel(getattr(logging, self.console_level))
        console.setFormatter(self._get_formatter("console"))
        logger.addHandler(console)

        logger.addHandler(self._rotating("nanoshuttle.log", logging.DEBUG))
        logger.addHandler(self._rotating("nanoshuttle_errors.log", logging.ERROR))

        for handler in logger.handlers:
            handler.addFilter(self.run_context)
        logger.propagate = False
        return logger

    def _rotating(self, filename: str, level: int) -> logging.Handler:
        handler = logging.handlers.RotatingFileHandler(
            str(self.log_dir / filename),
            maxBytes=int(os.getenv("LOG_MAX_BYTES", 10485760)),  # 10MB
            backupCount=int(os.getenv("LOG_BACKUP_COUNT", 5)),
            encoding="utf-8",
            delay=True,
        )
        handler.setLevel(level)
        handler.setFormatter(self._get_formatter("file"))
        return handler

    def _get_formatter(self, handler_type: str) -> logging.Formatter:
        if self.log_format == "json" and JSON_LOGGER_AVAILABLE:
            return jsonlogger.JsonFormatter(
                "%(asctime)s %(name)s %(levelname)s %(command)s %(seed)s %(message)s %(funcName)s"
            )

        if handler_type == "console":
            return logging.Formatter("%(levelname)-8s | %(command)-9s | %(message)s")
        return logging.Formatter(
            "%(asctime)s | %(levelname)-8s | %(command)-9s | seed=%(seed)-6s | %(name)-24s | %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )

    def get_logger(self, name: str) -> logging.Logger:
        root = self.root
        if name == PACKAGE_LOGGER:
            return root
        if not name.startswith(PACKAGE_LOGGER + "."):
            name = f"{PACKAGE_LOGGER}.{name}"
        return logging.getLogger(name)


_nanoshuttle_logger = NanoshuttleLogger()


def get_logger(name: str = PACKAGE_LOGGER) -> logging.Logger:
    """
    Logger hijo del logger del paquete.

    Usage:
        from nanoshuttle.logger import get_logger
        logger = get_logger(__name__)
        logger.info("Barrido iniciado")
    """
    return _nanoshuttle_logger.get_logger(name)


def bind_run(**fields: Any) -> None:
    """Actualiza el contexto (``command``, ``seed``) que acompaña a cada registro."""
    _nanoshuttle_logger.run_context.bind(**fields)


def setup_application_logging(
    command: Optional[str] = None,
    config: Optional[Union[str, Path]] = None,
    seed: Optional[int] = None,
) -> logging.Logger:
    """Abre una corrida de la CLI: fija el contexto y deja una línea de cabecera."""
    bind_run(command=command, seed=seed)
    logger = get_logger(PACKAGE_LOGGER)
    logger.info(
        f"Corrida '{command or _UNSET}': dispositivo {config or 'por defecto'}, "
        f"nivel {_nanoshuttle_logger.log_level}, logs en {_nanoshuttle_logger.log_dir}"
    )
    return logger
