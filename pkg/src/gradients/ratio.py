# src/gradients/ratio.py
"""
Density ratio r = p/q with the variational parameters frozen, and the log-ratio shift.
"""

import logging
from dataclasses import dataclass
from typing import Any, Tuple

import numpy as np

from src.targets.base import TargetDensity
from src.utils.errors import DomainError, NumericalError

logger = logging.getLogger(__name__)


def check_samples(name: str, values: Any) -> np.ndarray:
    """Raise NumericalError naming the first sample (row) with a non-finite value."""
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    bad_rows = ~np.isfinite(arr.reshape(arr.shape[0], -1)).all(axis=1)
    if bad_rows.any():
        index = int(np.flatnonzero(bad_rows)[0])
        logger.error(f"Non-finite {name} at sample {index}")
        raise NumericalError(f"Non-finite {name} at sample {index}")
    return arr


@dataclass(frozen=True)
class StopGradientRatio:
    """
    log r(x) = log p(x) - log q(x; theta_s) for a frozen parameter snapshot.

    The snapshot is immutable, so nothing evaluated here can depend on theta; only
    the sample locations passed in carry the reparameterization path.
    Set normalized=True to use the normalized target density when it is known.
    """

    frozen_params: Any
    target: TargetDensity
    normalized: bool = False

    def log_r(self, x: Any) -> np.ndarray:
        if self.normalized and self.target.log_normalizer is not None:
            log_p = self.target.log_density(x)
        else:
            log_p = self.target.log_density_unnorm(x)
        log_p = check_samples("target log density", np.atleast_1d(log_p))
        log_q = np.atleast_1d(self.frozen_params.log_density(x))
        return check_samples("log ratio", log_p - log_q)

    def grad_x_log_r(self, x: Any) -> np.ndarray:
        score_p = check_samples("target score", np.atleast_2d(self.target.score(x)))
        return score_p - np.atleast_2d(self.frozen_params.score(x))


def ratio_shift(log_r: Any) -> Tuple[np.ndarray, float]:
    """
    Shift log-ratios by their maximum before exponentiating.

    Args:
        log_r: Finite log-ratios, shape (N,).

    Returns:
        (exp(log_r - max log_r), max log_r); the largest ratio is exactly 1.

    Raises:
        DomainError: Empty input.
        NumericalError: Non-finite input.
    """
    values = np.asarray(log_r, dtype=float).reshape(-1)
    if values.size == 0:
        raise DomainError("ratio_shift needs at least one log-ratio")
    check_samples("log ratio", values)
    shift = float(np.max(values))
    return np.exp(values - shift), shift
