"""Pytest configuration and fixtures."""

import pytest

from squaregroups.config import RunConfig, VerificationConfig
from squaregroups.constructors import a_tensor, from_abelian, v_free, znil, znil_set, zq
from squaregroups.zalgebra import FgAbelianGroup


@pytest.fixture
def z():
    """The infinite cyclic group."""
    return FgAbelianGroup.free(1)


@pytest.fixture
def z2():
    """The cyclic group of order two."""
    return FgAbelianGroup.cyclic(2)


@pytest.fixture
def z_nil():
    """The tensor unit Z_nil."""
    return znil()


@pytest.fixture
def znil_st():
    """Z_nil on two generators."""
    return znil_set(["s", "t"])


@pytest.fixture
def atensor_z():
    """Z^(x)."""
    return a_tensor(FgAbelianGroup.free(1))


@pytest.fixture
def atensor_z2():
    """(Z/2)^(x)."""
    return a_tensor(FgAbelianGroup.cyclic(2))


@pytest.fixture
def z_q():
    """The free square group on one generator."""
    return zq()


@pytest.fixture
def vfree_s():
    """V on one generator."""
    return v_free(["s"])


@pytest.fixture
def abelian_z2():
    """Z/2 as an abelian square group with zero ee-level."""
    return from_abelian(FgAbelianGroup.cyclic(2))


@pytest.fixture
def sample_verification_config():
    """Sample verification configuration for testing."""
    return VerificationConfig(
        enumeration_limit=1024,
        random_samples=10,
        seed=7,
        max_word_length=8
    )


@pytest.fixture
def sample_run_config(sample_verification_config):
    """Sample run configuration for testing."""
    return RunConfig(
        threads=2,
        output_format="machine",
        max_degree=3,
        verification=sample_verification_config
    )
