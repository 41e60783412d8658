import os
import tempfile

# Los logs de la suite van a un directorio temporal; debe fijarse antes de
# importar el paquete porque el logger se configura al importarse.
os.environ.setdefault("LOG_DIR", tempfile.mkdtemp(prefix="nanoshuttle-logs-"))
os.environ.setdefault("LOG_CONSOLE_LEVEL", "CRITICAL")

import pytest  # noqa: E402

from nanoshuttle.schemas import BoxGeometry, DeviceModel  # noqa: E402
from nanoshuttle.spectrum import enumerate_levels  # noqa: E402


@pytest.fixture(scope="session")
def geometry() -> BoxGeometry:
    return BoxGeometry()


@pytest.fixture(scope="session")
def table(geometry):
    return enumerate_levels(geometry, 1000.0)


@pytest.fixture
def model() -> DeviceModel:
    return DeviceModel()


@pytest.fixture
def quiet_model() -> DeviceModel:
    return DeviceModel(noise_enabled=False)


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch, tmp_path):
    monkeypatch.delenv("NANOSHUTTLE_SEED", raising=False)
    monkeypatch.chdir(tmp_path)
