# src/targets/gaussian.py
"""
Gaussian target N(mean, covariance).

The density is evaluated through the Cholesky factor wrapped as GaussianParams, so a
variational Gaussian built from `as_params()` evaluates log-density and score with
exactly the same floating-point operations. At q = p the log-ratio and the score
difference are then exactly zero.
"""

import logging
from typing import Any, Union

import numpy as np
from scipy.linalg import cholesky, LinAlgError

from src.families.gaussian import GaussianParams
from src.targets.base import TargetDensity
from src.utils.errors import NumericalError
from src.utils.utils import as_rows, squeeze_like

logger = logging.getLogger(__name__)


class GaussianTarget(TargetDensity):
    """Multivariate normal target with precomputed precision and log-normalizer."""

    has_hessian = True

    def __init__(self, mean: Any, covariance: Any) -> None:
        self.mean = np.array(mean, dtype=float).reshape(-1)
        self.dim = self.mean.size
        cov = np.array(covariance, dtype=float).reshape(self.dim, self.dim)
        if np.max(np.abs(cov - cov.T)) > 1e-12 * max(1.0, np.max(np.abs(cov))):
            logger.error("Target covariance is not symmetric")
            raise NumericalError("Target covariance must be symmetric")
        try:
            chol = cholesky(cov, lower=True)
        except LinAlgError as e:
            logger.error(f"Target covariance is not positive definite: {e}")
            raise NumericalError("Target covariance must be positive definite")
        self.covariance = cov
        self._params = GaussianParams(mean=self.mean, scale=chol)
        s_inv = self._params.scale_inv
        self.precision = s_inv.T @ s_inv
        self.precision = 0.5 * (self.precision + self.precision.T)
        self.log_normalizer = self._params.log_norm_const

    def as_params(self) -> GaussianParams:
        """The variational Gaussian that coincides with this target."""
        return self._params

    def log_density_unnorm(self, x: Any) -> Union[float, np.ndarray]:
        w = self._params.whiten(x)
        values = -0.5 * np.sum(w * w, axis=1)
        return squeeze_like(values, x)

    def score(self, x: Any) -> np.ndarray:
        return self._params.score(x)

    def hessian(self, x: Any) -> np.ndarray:
        rows = as_rows(x, self.dim)
        values = np.broadcast_to(-self.precision, (rows.shape[0], self.dim, self.dim)).copy()
        return squeeze_like(values, x)
