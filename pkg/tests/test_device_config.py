import pytest

from nanoshuttle.device_config import load_device_config, parse_device_config
from nanoshuttle.errors import ConfigError
from nanoshuttle.schemas import DeviceModel, Ladder
from nanoshuttle.settings import DEFAULT_CONFIG_FILE


def test_shipped_config_matches_defaults():
    assert load_device_config(DEFAULT_CONFIG_FILE) == DeviceModel()


def test_missing_keys_take_defaults():
    model = parse_device_config("[geometry]\nheight_H = 4.0\n")
    assert model.geometry.height_H == 4.0
    assert model.geometry.length_L == 8.0
    assert model.junction == DeviceModel().junction


def test_transport_values_are_coerced():
    text = "[transport]\nnoise_enabled = false\nladder = quantum\npeak_current_pA = 2.5\n"
    model = parse_device_config(text)
    assert model.noise_enabled is False
    assert model.ladder is Ladder.QUANTUM
    assert model.peak_current_pA == 2.5


def test_peak_current_follows_junction():
    model = parse_device_config("[junction]\njunction_resistance_R = 1e9\n")
    assert model.peak_current_pA == pytest.approx(160.2, abs=0.1)


@pytest.mark.parametrize(
    "text, message",
    [
        ("[geometry]\ndepth = 3\n", "[geometry] unknown key 'depth'"),
        ("[geometry]\nlength_L = -1\n", "[geometry] invalid value for 'length_L'"),
        ("[mechanics]\nasymmetry = lots\n", "[mechanics] invalid value for 'asymmetry'"),
        ("[transport]\nwidth = 3\n", "[transport] unknown key 'width'"),
        ("[transport]\npeak_width_mV = 0\n", "[transport] invalid value for 'peak_width_mV'"),
        ("[optics]\nindex = 1.5\n", "unknown section [optics]"),
    ],
)
def test_config_errors_name_the_key(text, message):
    with pytest.raises(ConfigError) as info:
        parse_device_config(text)
    assert message in str(info.value)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_device_config(tmp_path / "nope.ini")


def test_load_from_file(tmp_path):
    path = tmp_path / "device.ini"
    path.write_text("[gate]\nperiod_dVgs = 0.6\n", encoding="utf-8")
    assert load_device_config(path).gate.period_dVgs == 0.6
