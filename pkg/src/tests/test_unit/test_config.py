import math

import pytest

from config import get_run_config, get_settings, parse_config, serialize_config
from config.settings import TestingSettings
from exceptions import ConfigParseError
from schemas import RunConfig


def test_testing_settings_are_selected(settings):
    assert isinstance(settings, TestingSettings), "pytest-env sets ENVIRONMENT=testing."
    assert settings.OUTPUT_DIR.endswith("output")
    assert isinstance(get_settings(), TestingSettings)


def test_empty_text_gives_table_defaults():
    config = parse_config("")
    assert config == RunConfig()
    assert config.soil.friction_angle == pytest.approx(math.radians(30.0))
    assert config.robot.torque_limit == 30


def test_default_file_matches_defaults(settings):
    """
    Test that the shipped default configuration reproduces the built-in tables.
    """
    path = settings.BASE_DIR.parent / "configs" / "default.cfg"
    config = get_run_config(str(path), settings)
    assert config.soil == RunConfig().soil, "Degrees must convert to the default radians."
    assert config.ddpg.hidden_sizes == (64, 64)
    assert config.env.physics_dt == pytest.approx(1e-3)


def test_serialize_round_trip():
    text = """
[soil]
k_phi = 150000
friction_angle_deg = 25

[ddpg]
hidden_sizes = 32-16
gamma = 0.95

[run]
output_dir = /tmp/walker-runs
"""
    config = parse_config(text)
    assert config.soil.friction_angle == pytest.approx(math.radians(25))
    assert config.ddpg.hidden_sizes == (32, 16)
    assert config.output_dir == "/tmp/walker-runs"
    assert parse_config(serialize_config(config)) == config, "Serialized config must parse back unchanged."


@pytest.mark.parametrize("text, line", [
    ("[soil]\nk_phi = 1\n[bogus]\n", 3),
    ("[soil]\nthis is not an entry\n", 2),
    ("k_phi = 1\n", 1),
    ("[soil]\nk_phi = 1\nk_phi = 2\n", 3),
    ("[soil]\n[soil]\n", 2),
    ("# comment\n[ddpg]\ngamma = 1.5\n", 3),
    ("[ddpg]\nunknown_key = 3\n", 2),
    ("[soil]\nfriction_angle = 0.5\nfriction_angle_deg = 30\n", 3),
    ("[env]\ncontrol_dt = abc\n", 2),
    ("[run]\nfoo = bar\n", 2),
    ("[reward]\nw_forward =\n", 2),
])
def test_parse_errors_report_lines(text, line):
    with pytest.raises(ConfigParseError) as error:
        parse_config(text)
    assert error.value.line == line, f"Expected the error on line {line}, got {error.value.line}."


def test_cross_field_error_points_at_section_header():
    text = "[run]\noutput_dir = x\n\n[ddpg]\nbatch_size = 64\nbuffer_capacity = 10\n"
    with pytest.raises(ConfigParseError) as error:
        parse_config(text)
    assert error.value.line == 4, "Cross-field violations are reported at the section header."


def test_physics_step_limit():
    with pytest.raises(ConfigParseError):
        parse_config("[env]\ncontrol_dt = 0.1\nphysics_substeps = 2\n")


def test_seed_overrides(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("[env]\nseed = 4\n[ddpg]\nseed = 5\n", encoding="utf-8")

    config = get_run_config(str(path), TestingSettings())
    assert (config.env.seed, config.ddpg.seed) == (4, 5)

    config = get_run_config(str(path), TestingSettings(TERRA_SEED=9))
    assert (config.env.seed, config.ddpg.seed) == (9, 9), "TERRA_SEED replaces both seeds."

    config = get_run_config(str(path), TestingSettings(TERRA_SEED=9), seed=11)
    assert (config.env.seed, config.ddpg.seed) == (11, 11), "An explicit seed wins."


def test_missing_and_binary_files(tmp_path):
    with pytest.raises(OSError):
        get_run_config(str(tmp_path / "absent.cfg"), TestingSettings())
    binary = tmp_path / "binary.cfg"
    binary.write_bytes(b"\xff\xfe\x00")
    with pytest.raises(ConfigParseError):
        get_run_config(str(binary), TestingSettings())
