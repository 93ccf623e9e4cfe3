# src/targets/mixture.py
"""
Gaussian mixture target p(x) = sum_k w_k N_k(x), evaluated with log-sum-exp.
"""

import logging
from typing import Any, Sequence, Union

import numpy as np
from scipy.special import logsumexp

from src.targets.base import TargetDensity
from src.targets.gaussian import GaussianTarget
from src.utils.errors import DomainError
from src.utils.utils import as_rows, squeeze_like

logger = logging.getLogger(__name__)


class MixtureTarget(TargetDensity):
    """Normalized mixture of Gaussian targets (log_normalizer = 0)."""

    has_hessian = True

    def __init__(self, weights: Sequence[float], components: Sequence[GaussianTarget]) -> None:
        weights = np.asarray(weights, dtype=float).reshape(-1)
        if weights.size != len(components) or weights.size == 0:
            raise DomainError(f"{weights.size} weights for {len(components)} components")
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
            logger.error(f"Mixture weights are not on the simplex: {weights}")
            raise DomainError("Mixture weights must be non-negative and sum to 1")
        dims = {c.dim for c in components}
        if len(dims) != 1:
            raise DomainError(f"Mixture components disagree on dimension: {sorted(dims)}")
        self.weights = weights
        self.components = list(components)
        self.dim = self.components[0].dim
        self.log_normalizer = 0.0
        with np.errstate(divide="ignore"):
            self._log_weights = np.log(weights)

    @classmethod
    def from_moments(cls, weights: Sequence[float], means: Sequence[Any], covariances: Sequence[Any]) -> "MixtureTarget":
        return cls(weights, [GaussianTarget(m, c) for m, c in zip(means, covariances)])

    def _joint(self, rows: np.ndarray) -> np.ndarray:
        return np.stack([
            lw + c.log_density(rows) for lw, c in zip(self._log_weights, self.components)
        ], axis=1)

    def log_density_unnorm(self, x: Any) -> Union[float, np.ndarray]:
        # logsumexp shifts by the row maximum, so |x| up to 1e3 stays finite
        values = logsumexp(self._joint(as_rows(x, self.dim)), axis=1)
        return squeeze_like(values, x)

    def _responsibilities(self, rows: np.ndarray) -> np.ndarray:
        joint = self._joint(rows)
        return np.exp(joint - logsumexp(joint, axis=1, keepdims=True))

    def score(self, x: Any) -> np.ndarray:
        rows = as_rows(x, self.dim)
        resp = self._responsibilities(rows)
        values = np.zeros_like(rows)
        for k, c in enumerate(self.components):
            values += resp[:, k:k + 1] * c.score(rows)
        return squeeze_like(values, x)

    def hessian(self, x: Any) -> np.ndarray:
        rows = as_rows(x, self.dim)
        resp = self._responsibilities(rows)
        total = np.zeros((rows.shape[0], self.dim))
        values = np.zeros((rows.shape[0], self.dim, self.dim))
        for k, c in enumerate(self.components):
            s_k = c.score(rows)
            total += resp[:, k:k + 1] * s_k
            values += resp[:, k, None, None] * (-c.precision + s_k[:, :, None] * s_k[:, None, :])
        values -= total[:, :, None] * total[:, None, :]
        return squeeze_like(values, x)


def mixture_target_logsumexp(target: MixtureTarget, x: Any) -> Union[float, np.ndarray]:
    """Stable log of sum_k w_k N_k(x)."""
    return target.log_density_unnorm(x)


def three_mode_1d_mixture() -> MixtureTarget:
    """The 3-mode 1D benchmark 0.4 N(-1, 0.25) + 0.3 N(0.8, 0.25) + 0.3 N(3, 0.64) (variances)."""
    return MixtureTarget.from_moments(
        [0.4, 0.3, 0.3],
        [[-1.0], [0.8], [3.0]],
        [[[0.25]], [[0.25]], [[0.64]]],
    )
