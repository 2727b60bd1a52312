"""Tests for configuration dataclasses."""

import pytest
from squaregroups.config import THREADS_ENV, RunConfig, VerificationConfig, threads_from_env
from squaregroups.utils import ConfigurationError


class TestVerificationConfig:
    """Tests for VerificationConfig."""

    def test_defaults_valid(self):
        """Test default verification configuration."""
        VerificationConfig().validate()  # Should not raise

    def test_invalid_enumeration_limit(self):
        """Test non-positive enumeration limit."""
        config = VerificationConfig(enumeration_limit=0)
        with pytest.raises(ValueError, match="enumeration_limit must be positive"):
            config.validate()

    def test_invalid_random_samples(self):
        """Test negative sample count."""
        config = VerificationConfig(random_samples=-1)
        with pytest.raises(ValueError, match="random_samples must be non-negative"):
            config.validate()

    def test_invalid_word_length(self):
        """Test non-positive word length."""
        config = VerificationConfig(max_word_length=0)
        with pytest.raises(ValueError, match="max_word_length must be positive"):
            config.validate()

    def test_round_trip(self, sample_verification_config):
        """Test conversion to and from dictionaries."""
        data = sample_verification_config.to_dict()
        assert data["enumeration_limit"] == 1024
        assert VerificationConfig.from_dict(data) == sample_verification_config

    def test_from_dict_ignores_unknown_keys(self):
        """Test that unknown keys are dropped."""
        config = VerificationConfig.from_dict({"seed": 3, "colour": "red"})
        assert config.seed == 3


class TestRunConfig:
    """Tests for RunConfig."""

    def test_valid(self, sample_run_config):
        """Test valid run configuration."""
        sample_run_config.validate()  # Should not raise

    def test_invalid_threads(self):
        """Test zero threads."""
        config = RunConfig(threads=0)
        with pytest.raises(ValueError, match="threads must be at least 1"):
            config.validate()

    def test_invalid_format(self):
        """Test unknown output format."""
        config = RunConfig(output_format="yaml")
        with pytest.raises(ValueError, match="output_format must be"):
            config.validate()

    def test_invalid_degree(self):
        """Test negative homotopy degree."""
        config = RunConfig(max_degree=-1)
        with pytest.raises(ValueError, match="max_degree must be non-negative"):
            config.validate()

    def test_nested_validation(self):
        """Test that verification settings are validated too."""
        config = RunConfig(verification=VerificationConfig(enumeration_limit=-5))
        with pytest.raises(ValueError, match="enumeration_limit"):
            config.validate()

    def test_round_trip(self, sample_run_config):
        """Test conversion to and from dictionaries."""
        restored = RunConfig.from_dict(sample_run_config.to_dict())
        assert restored == sample_run_config

    def test_from_empty_dict(self):
        """Test defaults when loading an empty dictionary."""
        config = RunConfig.from_dict({})
        assert config.threads == 1
        assert config.output_format == "text"
        assert config.max_degree == 4


class TestThreadsFromEnv:
    """Tests for the thread-count override."""

    def test_unset_returns_default(self, monkeypatch):
        """Test fallback when the variable is unset."""
        monkeypatch.delenv(THREADS_ENV, raising=False)
        assert threads_from_env(3) == 3

    def test_override(self, monkeypatch):
        """Test a valid override."""
        monkeypatch.setenv(THREADS_ENV, "4")
        assert threads_from_env(1) == 4

    def test_not_an_integer(self, monkeypatch):
        """Test a malformed override."""
        monkeypatch.setenv(THREADS_ENV, "many")
        with pytest.raises(ConfigurationError, match="must be an integer"):
            threads_from_env()

    def test_not_positive(self, monkeypatch):
        """Test a zero override."""
        monkeypatch.setenv(THREADS_ENV, "0")
        with pytest.raises(ConfigurationError, match="must be at least 1"):
            threads_from_env()
