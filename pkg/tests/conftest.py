"""Pytest configuration and fixtures."""

import logging
from fractions import Fraction

import pytest

from qvwp import HeckeParams, SamplePolicy, Tolerance

# Configure logging for tests
logging.basicConfig(level=logging.DEBUG)


@pytest.fixture
def tol() -> Tolerance:
    """Default series tolerance."""
    return Tolerance()


@pytest.fixture
def generic_params() -> HeckeParams:
    """Generic Hecke parameters with step 1."""
    return HeckeParams(kappa=0.137, lambda_=-0.213, upsilon=0.291, varsigma=0.117, q=0.45)


@pytest.fixture
def generic_params_s2() -> HeckeParams:
    """Generic Hecke parameters with step 2."""
    return HeckeParams(
        kappa=-0.17, lambda_=0.29, upsilon=0.08, varsigma=-0.33, q=0.6, s=Fraction(2)
    )


@pytest.fixture
def small_policy() -> SamplePolicy:
    """Sampling policy with few points for quick checks."""
    return SamplePolicy(n_points=6, seed=7)


@pytest.fixture
def quiet_logger() -> logging.Logger:
    """Logger for engine tests."""
    return logging.getLogger("qvwp.tests")
