# src/targets/logistic.py
"""
Bayesian logistic regression posterior over w = (weights, bias) with an N(0, prior_variance I) prior.
"""

import logging
from typing import Any, Union

import numpy as np
from scipy.special import expit

from src.targets.base import TargetDensity
from src.utils.errors import DataError, DomainError
from src.utils.utils import as_rows, squeeze_like

logger = logging.getLogger(__name__)


def log_sigmoid(t: np.ndarray) -> np.ndarray:
    """log(1 / (1 + exp(-t))) without exponentiating large positive numbers."""
    return -np.logaddexp(0.0, -t)


class LogisticPosterior(TargetDensity):
    """
    Unnormalized posterior log p(w) = -|w|^2 / (2 prior_variance) + sum_i log sigmoid(y_i z_i),
    with z_i = x_i . w_feat + w_bias and labels y_i in {-1, +1}.
    """

    has_hessian = True

    def __init__(self, features: Any, labels: Any, prior_variance: float = 1.0) -> None:
        features = np.asarray(features, dtype=float)
        labels = np.asarray(labels, dtype=float).reshape(-1)
        if features.ndim != 2 or features.shape[0] != labels.size:
            raise DataError(f"features {features.shape} and labels {labels.shape} do not align")
        if not np.all(np.isin(labels, (-1.0, 1.0))):
            raise DataError("labels must be -1 or +1")
        if prior_variance <= 0:
            raise DomainError(f"prior_variance must be positive, got {prior_variance}")
        self.features = features
        self.labels = labels
        self.prior_variance = float(prior_variance)
        self.dim = features.shape[1] + 1
        self._design = np.hstack([features, np.ones((features.shape[0], 1))])
        logger.debug(f"LogisticPosterior: {features.shape[0]} rows, dim={self.dim}, "
                     f"prior_variance={self.prior_variance}")

    def logits(self, w: Any) -> np.ndarray:
        """Return z = X~ w for a batch of weight rows, shape (M, N)."""
        return as_rows(w, self.dim) @ self._design.T

    def log_density_unnorm(self, x: Any) -> Union[float, np.ndarray]:
        rows = as_rows(x, self.dim)
        margins = self.labels * (rows @ self._design.T)
        values = -0.5 * np.sum(rows * rows, axis=1) / self.prior_variance + log_sigmoid(margins).sum(axis=1)
        return squeeze_like(values, x)

    def score(self, x: Any) -> np.ndarray:
        rows = as_rows(x, self.dim)
        margins = self.labels * (rows @ self._design.T)
        coef = expit(-margins) * self.labels
        values = -rows / self.prior_variance + coef @ self._design
        return squeeze_like(values, x)

    def hessian(self, x: Any) -> np.ndarray:
        rows = as_rows(x, self.dim)
        margins = self.labels * (rows @ self._design.T)
        curvature = expit(margins) * expit(-margins)
        values = -np.einsum("mi,ij,ik->mjk", curvature, self._design, self._design)
        values -= np.eye(self.dim) / self.prior_variance
        return squeeze_like(values, x)

    def predict_proba(self, features: Any, weight_samples: Any) -> np.ndarray:
        """Posterior predictive P(y = +1 | x) averaged over weight samples."""
        design = np.hstack([np.asarray(features, dtype=float), np.ones((len(features), 1))])
        return expit(as_rows(weight_samples, self.dim) @ design.T).mean(axis=0)
