# src/geometry/empirical.py
"""
Gaussian fit to a particle cloud.
"""

import logging
from dataclasses import dataclass
from typing import Any

import numpy as np

from src.config.config import FIT_REGULARIZATION
from src.flows.state import ParticleCloud
from src.geometry.spd import SymmetricPD, symmetrize
from src.utils.errors import DomainError, NumericalError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EmpiricalFit:
    """Sample mean and regularized unbiased covariance; degenerate when the cloud has no spread."""

    mean: np.ndarray
    covariance: SymmetricPD
    degenerate: bool = False


def empirical_gaussian_fit(cloud: Any) -> EmpiricalFit:
    """
    Fit N(mean, cov) to M >= n + 1 particles with cov = unbiased sample covariance + 1e-10 I.

    A cloud whose covariance is not positive definite after regularization (for example
    every particle at one point) yields cov = 1e-10 I with degenerate=True.

    Raises:
        DomainError: M <= n.
    """
    positions = cloud.positions if isinstance(cloud, ParticleCloud) else np.atleast_2d(np.asarray(cloud, dtype=float))
    m, n = positions.shape
    if m <= n:
        raise DomainError(f"A Gaussian fit in {n}D needs at least {n + 1} particles, got {m}")
    mean = positions.mean(axis=0)
    raw = np.atleast_2d(np.cov(positions, rowvar=False, ddof=1))
    regularized = symmetrize(raw) + FIT_REGULARIZATION * np.eye(n)
    try:
        covariance = SymmetricPD(regularized)
    except NumericalError:
        logger.warning(f"Degenerate particle cloud ({m} particles in {n}D); using {FIT_REGULARIZATION:g} I")
        return EmpiricalFit(mean=mean, covariance=SymmetricPD(FIT_REGULARIZATION * np.eye(n)), degenerate=True)
    degenerate = bool(np.all(raw == 0))
    if degenerate:
        logger.warning(f"Particle cloud has zero spread; covariance is {FIT_REGULARIZATION:g} I")
    return EmpiricalFit(mean=mean, covariance=covariance, degenerate=degenerate)
