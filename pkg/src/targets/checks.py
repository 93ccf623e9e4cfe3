# src/targets/checks.py
"""
Finite-difference checks of analytic scores and Hessians.
"""

import logging
from typing import Any

import numpy as np

from src.targets.base import TargetDensity
from src.utils.errors import DomainError, NumericalError

logger = logging.getLogger(__name__)


def score_finite_diff_check(target: TargetDensity, x: Any, h: float = 1e-5) -> float:
    """
    Compare the analytic score with central differences of log_density_unnorm.

    Args:
        target: Target density.
        x: Point of shape (dim,).
        h: Step size, h > 0.

    Returns:
        max_i |score_i - fd_i| / (1 + |score_i|).

    Raises:
        DomainError: h <= 0 or x not finite.
        NumericalError: Non-finite log-density at a perturbed point (names the coordinate).
    """
    if h <= 0:
        raise DomainError(f"Step size must be positive, got {h}")
    point = np.asarray(x, dtype=float).reshape(-1)
    if not np.isfinite(point).all():
        raise DomainError("Check point must be finite")

    analytic = np.asarray(target.score(point), dtype=float)
    errors = np.empty(point.size)
    for i in range(point.size):
        step = np.zeros_like(point)
        step[i] = h
        upper = target.log_density_unnorm(point + step)
        lower = target.log_density_unnorm(point - step)
        if not (np.isfinite(upper) and np.isfinite(lower)):
            logger.error(f"Non-finite log density at coordinate {i} perturbed by {h}")
            raise NumericalError(f"Non-finite log density when perturbing coordinate {i}")
        fd = (upper - lower) / (2.0 * h)
        errors[i] = abs(analytic[i] - fd) / (1.0 + abs(analytic[i]))
    worst = float(errors.max())
    logger.debug(f"Score check for {target.__class__.__name__} at {point}: max rel error {worst:.3e}")
    return worst


def hessian_finite_diff_check(target: TargetDensity, x: Any, h: float = 1e-5) -> float:
    """Max relative deviation between the Hessian and central differences of the score."""
    if h <= 0:
        raise DomainError(f"Step size must be positive, got {h}")
    point = np.asarray(x, dtype=float).reshape(-1)
    analytic = np.asarray(target.hessian(point), dtype=float)
    numeric = np.empty_like(analytic)
    for i in range(point.size):
        step = np.zeros_like(point)
        step[i] = h
        numeric[:, i] = (target.score(point + step) - target.score(point - step)) / (2.0 * h)
    return float(np.max(np.abs(analytic - numeric) / (1.0 + np.abs(analytic))))
