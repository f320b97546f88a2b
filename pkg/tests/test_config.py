"""Config parsing, validation, and round-trip tests."""

import math

import pytest

from kerrshutter import (
    ConfigError,
    build_scenario,
    default_config,
    dump_config,
    load_config,
    nonlinear_phase,
)
from kerrshutter.config import dumps_config

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib


def test_default_config_builds():
    scenario = build_scenario(default_config("delay"))
    assert scenario.scan.type == "delay"
    assert scenario.scan.grid.size == 161
    assert scenario.imperfection == 0.967


def test_round_trip_identity(tmp_path):
    raw = default_config("g2")
    path = tmp_path / "scenario.toml"
    dump_config(raw, path)
    loaded = load_config(path)
    assert loaded == raw
    # and a second cycle through text form
    assert tomllib.loads(dumps_config(loaded)) == raw


def test_round_trip_with_materials_section(tmp_path):
    raw = default_config("delay")
    raw["materials"] = {
        "bk7ish": {
            "b": [1.03961212, 0.231792344],
            "c_um2": [0.00600069867, 0.0200179144],
            "valid_range_um": [0.3, 2.5],
        }
    }
    raw["fiber"]["material"] = "bk7ish"
    path = tmp_path / "scenario.toml"
    dump_config(raw, path)
    assert load_config(path) == raw
    scenario = build_scenario(load_config(path))
    assert "bk7ish" in scenario.materials


def test_calibration_auto_resolution():
    scenario = build_scenario(default_config("delay"))
    assert nonlinear_phase(scenario.shutter, 0.0) == pytest.approx(math.pi, rel=1e-9)


def test_explicit_calibration_respected():
    raw = default_config("delay")
    raw["shutter"]["calibration"] = 2.0
    scenario = build_scenario(raw)
    assert scenario.shutter.calibration == 2.0


def test_mean_pairs_auto_resolution():
    scenario = build_scenario(default_config("g2"))
    assert scenario.source.mean_pairs == pytest.approx(0.0038218, rel=1e-4)


def test_explicit_mean_pairs_respected():
    raw = default_config("g2")
    raw["source"]["mean_pairs"] = 0.01
    scenario = build_scenario(raw)
    assert scenario.source.mean_pairs == 0.01


def test_unknown_section_rejected():
    raw = default_config("delay")
    raw["extras"] = {"x": 1}
    with pytest.raises(ConfigError, match="unknown section"):
        build_scenario(raw)


def test_unknown_key_rejected():
    raw = default_config("delay")
    raw["fiber"]["lenght_m"] = 0.1  # typo must not pass silently
    with pytest.raises(ConfigError, match="lenght_m"):
        build_scenario(raw)


def test_unknown_material_key_rejected():
    raw = default_config("delay")
    raw["materials"] = {"glass": {"b": [1.0], "c_um2": [0.01], "range_um": [0.3, 2.0]}}
    with pytest.raises(ConfigError, match="range_um"):
        build_scenario(raw)


def test_scan_keys_checked_per_type():
    raw = default_config("delay")
    raw["scan"]["energy_min_nj"] = 0.0
    with pytest.raises(ConfigError, match="not valid for a delay scan"):
        build_scenario(raw)


def test_missing_section_rejected():
    raw = default_config("delay")
    del raw["pump"]
    with pytest.raises(ConfigError, match=r"\[pump\]"):
        build_scenario(raw)


def test_missing_required_key_rejected():
    raw = default_config("delay")
    del raw["fiber"]["length_m"]
    with pytest.raises(ConfigError, match="length_m"):
        build_scenario(raw)


def test_unresolved_material_reference():
    raw = default_config("delay")
    raw["fiber"]["material"] = "unobtanium"
    with pytest.raises(ConfigError, match="unobtanium"):
        build_scenario(raw)


def test_g2_scan_requires_seed_and_pulses():
    raw = default_config("g2")
    del raw["scan"]["seed"]
    with pytest.raises(ConfigError, match="seed"):
        build_scenario(raw)
    raw = default_config("g2")
    raw["scan"]["n_pulses"] = 0
    with pytest.raises(ConfigError, match="n_pulses"):
        build_scenario(raw)


def test_bad_values_rejected():
    raw = default_config("delay")
    raw["fiber"]["length_m"] = -0.1
    with pytest.raises(ConfigError):
        build_scenario(raw)

    raw = default_config("delay")
    raw["pump"]["shape"] = "triangle"
    with pytest.raises(ConfigError):
        build_scenario(raw)

    raw = default_config("delay")
    raw["scan"]["steps"] = 0
    with pytest.raises(ConfigError, match="steps"):
        build_scenario(raw)

    raw = default_config("delay")
    raw["shutter"]["imperfection"] = 1.5
    with pytest.raises(ConfigError, match="imperfection"):
        build_scenario(raw)


def test_type_errors_are_config_errors():
    raw = default_config("delay")
    raw["fiber"]["length_m"] = "ten"
    with pytest.raises(ConfigError, match="must be a number"):
        build_scenario(raw)

    raw = default_config("g2")
    raw["scan"]["steps"] = 2.5
    with pytest.raises(ConfigError, match="must be an integer"):
        build_scenario(raw)


def test_noise_power_law_and_table():
    scenario = build_scenario(default_config("energy"))
    assert scenario.noise.at(3.0e-9) == pytest.approx(1.3e-4, rel=1e-12)
    assert scenario.noise.at(1.5e-9) == pytest.approx(1.3e-4 / 8, rel=1e-12)
    assert scenario.noise.at(0.0) == 0.0

    raw = default_config("energy")
    raw["source"]["noise_table_nj"] = [[0.0, 0.0], [3.0, 2.0e-4]]
    scenario = build_scenario(raw)
    assert scenario.noise.at(1.5e-9) == pytest.approx(1.0e-4, rel=1e-9)
    assert scenario.noise.at(3.0e-9) == pytest.approx(2.0e-4, rel=1e-9)


def test_walkoff_override():
    raw = default_config("delay")
    raw["shutter"]["walkoff_ps_per_m"] = -16.0  # 1.6 ps over 10 cm
    scenario = build_scenario(raw)
    assert scenario.shutter.walkoff_s_per_m() == pytest.approx(-1.6e-11)


def test_missing_file_is_config_error(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "absent.toml")


def test_invalid_toml_is_config_error(tmp_path):
    path = tmp_path / "broken.toml"
    path.write_text("[fiber\nlength_m = 0.1\n")
    with pytest.raises(ConfigError, match="TOML"):
        load_config(path)
