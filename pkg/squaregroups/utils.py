"""Utility functions for squaregroups."""

import logging
import threading
from functools import cached_property, lru_cache, wraps
from typing import Any, Callable, Optional, TypeVar


F = TypeVar("F", bound=Callable[..., Any])

# Held while a shared value (cached builder result or cached attribute) is
# first computed. Reentrant, since builders call each other.
BUILD_LOCK = threading.RLock()


def setup_logger(name: str, level: int = logging.INFO) -> logging.Logger:
    """Set up a logger with consistent formatting.

    Args:
        name: Logger name
        level: Logging level

    Returns:
        Configured logger
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)

    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setLevel(level)
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )
        handler.setFormatter(formatter)
        logger.addHandler(handler)

    return logger


def set_package_level(level: int) -> None:
    """Switch every logger of the package (and its handlers) to ``level``.

    Args:
        level: Logging level
    """
    for name in list(logging.root.manager.loggerDict):
        if name == "squaregroups" or name.startswith("squaregroups."):
            pkg_logger = logging.getLogger(name)
            pkg_logger.setLevel(level)
            for handler in pkg_logger.handlers:
                handler.setLevel(level)


def binom2(k: int) -> int:
    """Return C(k, 2) = k(k-1)/2, valid for negative k as well.

    Args:
        k: Any integer

    Returns:
        The binomial coefficient C(k, 2)
    """
    return k * (k - 1) // 2


def shared_cache(fn: F) -> F:
    """Unbounded ``lru_cache`` whose lookups run under ``BUILD_LOCK``.

    Every caller, on any thread, gets the same object for the same
    arguments; morphisms between cached objects stay composable.
    """
    cached = lru_cache(maxsize=None)(fn)

    @wraps(fn)
    def wrapper(*args, **kwargs):
        with BUILD_LOCK:
            return cached(*args, **kwargs)

    wrapper.cache_info = cached.cache_info
    wrapper.cache_clear = cached.cache_clear
    return wrapper  # type: ignore[return-value]


class shared_property(cached_property):
    """``cached_property`` computed at most once per instance across threads."""

    def __get__(self, instance, owner=None):
        if instance is None:
            return self
        with BUILD_LOCK:
            if self.attrname in instance.__dict__:
                return instance.__dict__[self.attrname]
            return super().__get__(instance, owner)


class SquareGroupError(Exception):
    """Base exception for squaregroups errors."""
    pass


class ConfigurationError(SquareGroupError):
    """Raised for configuration issues."""
    pass


class ValidationError(SquareGroupError):
    """Raised when an axiom or compatibility law fails fatally."""

    def __init__(self, message: str, check: str = "", witness: Any = None):
        """Initialize validation error.

        Args:
            message: Error message
            check: Name of the failed check
            witness: Object exhibiting the failure
        """
        self.check = check
        self.witness = witness
        super().__init__(message)


class UnsupportedInstanceError(SquareGroupError):
    """Raised when an operation needs a finite or restricted instance."""
    pass


class NonRepresentableQuotientError(SquareGroupError):
    """Raised when a quotient datum fails re-validation."""
    pass


class ShapeMismatchError(SquareGroupError):
    """Raised when closed-form preconditions are not met."""
    pass


class UnresolvedReferenceError(SquareGroupError):
    """Raised when a document refers to an undeclared name."""

    def __init__(self, name: str, line: Optional[int] = None):
        self.name = name
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"unresolved reference '{name}'{where}")


class DocumentSyntaxError(SquareGroupError):
    """Raised for malformed input documents."""

    def __init__(self, message: str, line: int, column: int):
        """Initialize syntax error.

        Args:
            message: Error message
            line: 1-based line number
            column: 1-based column number
        """
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")
