from __future__ import annotations

import os
from pathlib import Path

from dotenv import load_dotenv

from .errors import ConfigError

# Load environment variables
load_dotenv()

PACKAGE_DIR = Path(__file__).resolve().parent
DEFAULT_CONFIG_FILE = PACKAGE_DIR / "config" / "device.ini"

NANOSHUTTLE_CONFIG = os.getenv("NANOSHUTTLE_CONFIG", str(DEFAULT_CONFIG_FILE))
EXPORT_DIR = Path(os.getenv("EXPORT_DIR", "exports"))


def default_seed() -> int:
    """Semilla de respaldo cuando la línea de comandos no trae --seed."""
    raw = os.getenv("NANOSHUTTLE_SEED", "0").strip()
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"NANOSHUTTLE_SEED must be an integer, got {raw!r}")
