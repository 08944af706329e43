"""Configuration defaults, validation, parsing, and digests."""

import pytest

from sortline.config import (
    DEFAULT_OCCUPANCY_LIMITS,
    ConfigError,
    EnvConfig,
    config_from_mapping,
    load_config_file,
)
from sortline.types import EnvVariant, InputType


def test_documented_defaults():
    config = EnvConfig()
    assert config.variant is EnvVariant.BASIC
    assert config.input_type is InputType.RANDOM
    assert config.threshold == 0.7
    assert config.abatement == 3.0
    assert config.r_acc == 0.5
    assert config.r_speed == 0.5
    assert config.base_noise_range == (0.10, 0.15)
    assert config.correct_mode_noise_range == (0.0, 0.05)
    assert config.incorrect_mode_noise_range == (0.10, 0.15)
    assert config.obs_noise_level == 0.0
    assert config.action_penalty == 0.0
    assert config.episode_length == 50
    config.validate()


def test_default_occupancy_limits_descend_from_one():
    assert DEFAULT_OCCUPANCY_LIMITS == (1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1)
    config = EnvConfig()
    assert config.limit_for_speed(1) == 1.0
    assert config.limit_for_speed(10) == 0.1


@pytest.mark.parametrize(
    "overrides",
    [
        {"threshold": 0.0},
        {"threshold": 1.0},
        {"episode_length": 0},
        {"obs_noise_level": -0.1},
        {"action_penalty": -1.0},
        {"abatement": -3.0},
        {"base_noise_range": (0.2, 0.1)},
        {"correct_mode_noise_range": (-0.1, 0.2)},
        {"occupancy_limits": (1.0,) * 9},
        {"occupancy_limits": (0.1,) * 9 + (1.5,)},
        {"occupancy_limits": (0.1,) * 9 + (0.2,)},
    ],
)
def test_validation_rejects(overrides):
    from dataclasses import replace

    with pytest.raises(ConfigError):
        replace(EnvConfig(), **overrides).validate()


class TestDigest:
    def test_equal_configs_share_a_digest(self):
        assert EnvConfig().digest() == EnvConfig().digest()

    def test_any_field_changes_it(self):
        base = EnvConfig().digest()
        assert config_from_mapping({"seed": 1}).digest() != base
        assert config_from_mapping({"variant": "advanced"}).digest() != base

    def test_shape(self):
        digest = EnvConfig().digest()
        assert len(digest) == 12
        int(digest, 16)


class TestFromMapping:
    def test_string_values(self):
        config = config_from_mapping(
            {
                "variant": "advanced",
                "input_type": "seasonal",
                "obs_noise_level": "0.3",
                "action_penalty": "0.5",
                "episode_length": "250",
                "seed": "42",
                "base_noise_range": "0.1, 0.2",
            }
        )
        assert config.variant is EnvVariant.ADVANCED
        assert config.input_type is InputType.SEASONAL
        assert config.obs_noise_level == 0.3
        assert config.episode_length == 250
        assert config.base_noise_range == (0.1, 0.2)

    def test_typed_values_pass_through(self):
        config = config_from_mapping({"threshold": 0.8, "base_noise_range": [0.0, 0.0]})
        assert config.threshold == 0.8
        assert config.base_noise_range == (0.0, 0.0)

    def test_base_is_preserved(self):
        base = config_from_mapping({"threshold": 0.9})
        config = config_from_mapping({"seed": 5}, base=base)
        assert config.threshold == 0.9
        assert config.seed == 5

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            config_from_mapping({"velocity": 1})

    def test_bad_value(self):
        with pytest.raises(ConfigError):
            config_from_mapping({"threshold": "fast"})
        with pytest.raises(ConfigError):
            config_from_mapping({"base_noise_range": "0.1"})

    def test_result_is_validated(self):
        with pytest.raises(ConfigError):
            config_from_mapping({"threshold": 2.0})


class TestConfigFile:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text(
            "# benchmark setup B\n"
            "variant = basic\n"
            "input_type = seasonal   # phased input\n"
            "action_penalty = 0.5\n"
            "occupancy_limits = 1.0 0.9 0.8 0.7 0.6 0.5 0.4 0.3 0.2 0.1\n"
            "\n"
            "seed = 7\n"
        )
        config = load_config_file(path)
        assert config.input_type is InputType.SEASONAL
        assert config.action_penalty == 0.5
        assert config.seed == 7

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("threshold 0.9\n")
        with pytest.raises(ConfigError):
            load_config_file(path)
