# tests/conftest.py
"""Shared fixtures: the illustration target, variational parameters and noise batches."""

import numpy as np
import pytest
from hypothesis import settings

from src.families.diagonal import DiagGaussianParams
from src.families.gaussian import GaussianParams
from src.families.noise import NoiseBatch
from src.targets.gaussian import GaussianTarget

settings.register_profile("toolkit", deadline=None, max_examples=50)
settings.load_profile("toolkit")


#-------------------------------
# targets
#-------------------------------
@pytest.fixture
def illustration_target():
    return GaussianTarget([0.0, 0.0], [[0.8, 0.4], [0.4, 0.8]])


@pytest.fixture
def near_identity_target():
    return GaussianTarget([0.3, -0.2], [[1.2, 0.0], [0.0, 0.9]])


#-------------------------------
# variational parameters
#-------------------------------
@pytest.fixture
def gaussian_params():
    return GaussianParams(mean=[0.5, -0.3], scale=[[1.1, 0.2], [0.3, 0.8]])


@pytest.fixture
def diag_params():
    return DiagGaussianParams(mean=[0.5, -0.3], log_std=[0.1, -0.2])


#-------------------------------
# noise
#-------------------------------
@pytest.fixture
def noise():
    return NoiseBatch.draw(0, 0, 64, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
