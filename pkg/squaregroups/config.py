"""Configuration dataclasses for squaregroups."""

import os
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from dotenv import load_dotenv

from .utils import ConfigurationError


THREADS_ENV = "SQUAREGROUPS_THREADS"


@dataclass
class VerificationConfig:
    """Configuration for elementwise and randomized verification.

    Attributes:
        enumeration_limit: Largest group order that is enumerated elementwise
        random_samples: Random elements drawn per sampled law
        seed: Seed for the sampling generator
        max_word_length: Longest random word used in word-level checks
    """

    enumeration_limit: int = 4096
    random_samples: int = 25
    seed: int = 0
    max_word_length: int = 12

    def validate(self) -> None:
        """Validate verification configuration.

        Raises:
            ValueError: If configuration is invalid
        """
        if self.enumeration_limit <= 0:
            raise ValueError(f"enumeration_limit must be positive, got {self.enumeration_limit}")

        if self.random_samples < 0:
            raise ValueError(f"random_samples must be non-negative, got {self.random_samples}")

        if self.max_word_length <= 0:
            raise ValueError(f"max_word_length must be positive, got {self.max_word_length}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "enumeration_limit": self.enumeration_limit,
            "random_samples": self.random_samples,
            "seed": self.seed,
            "max_word_length": self.max_word_length,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "VerificationConfig":
        return cls(**{k: v for k, v in data.items() if k in cls.__dataclass_fields__})


@dataclass
class RunConfig:
    """Configuration for a CLI run.

    Attributes:
        threads: Worker threads for independent checks
        output_format: "text" or "machine"
        max_degree: Highest homotopy degree computed by default
        verification: Verification settings
    """

    threads: int = 1
    output_format: str = "text"
    max_degree: int = 4
    verification: VerificationConfig = field(default_factory=VerificationConfig)

    def validate(self) -> None:
        """Validate run configuration.

        Raises:
            ValueError: If configuration is invalid
        """
        if self.threads < 1:
            raise ValueError(f"threads must be at least 1, got {self.threads}")

        if self.output_format not in ["text", "machine"]:
            raise ValueError(f"output_format must be 'text' or 'machine', got '{self.output_format}'")

        if self.max_degree < 0:
            raise ValueError(f"max_degree must be non-negative, got {self.max_degree}")

        self.verification.validate()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "threads": self.threads,
            "output_format": self.output_format,
            "max_degree": self.max_degree,
            "verification": self.verification.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        verification = VerificationConfig.from_dict(data.get("verification", {}))
        return cls(
            threads=data.get("threads", 1),
            output_format=data.get("output_format", "text"),
            max_degree=data.get("max_degree", 4),
            verification=verification,
        )


def threads_from_env(default: Optional[int] = None) -> Optional[int]:
    """Read the thread-count override from the environment or a .env file.

    Args:
        default: Value returned when no override is set

    Returns:
        The override, or ``default``

    Raises:
        ConfigurationError: If the override is not a positive integer
    """
    load_dotenv()
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"{THREADS_ENV} must be an integer, got '{raw}'")
    if value < 1:
        raise ConfigurationError(f"{THREADS_ENV} must be at least 1, got {value}")
    return value
