# src/families/gaussian.py
"""
Full-scale Gaussian variational family N(mean, S S^T) with row-vector samples.

Samples are x = mean + z S^T. The scale S is stored dense and unconstrained; every
density evaluation goes through one LU factorization of S computed at construction.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Union

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from src.config.config import SINGULAR_PIVOT_RTOL
from src.families.noise import NoiseBatch, noise_array
from src.utils.errors import NumericalError
from src.utils.utils import as_rows, squeeze_like

logger = logging.getLogger(__name__)

LOG_2PI = float(np.log(2.0 * np.pi))


@dataclass(frozen=True, eq=False)
class GaussianParams:
    """Variational parameters theta = (mean, scale)."""

    mean: np.ndarray
    scale: np.ndarray
    _lu: Any = field(init=False, repr=False, compare=False)
    log_norm_const: float = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        mean = np.array(self.mean, dtype=float).reshape(-1)
        scale = np.array(self.scale, dtype=float).reshape(mean.size, mean.size)
        if not (np.isfinite(mean).all() and np.isfinite(scale).all()):
            logger.error("Gaussian parameters contain non-finite entries")
            raise NumericalError("Gaussian parameters contain non-finite entries")
        mean.setflags(write=False)
        scale.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "scale", scale)

        lu, piv = lu_factor(scale, check_finite=False)
        pivots = np.abs(np.diag(lu))
        floor = SINGULAR_PIVOT_RTOL * max(np.linalg.norm(scale), np.finfo(float).tiny)
        if pivots.min() < floor:
            logger.error(f"Singular scale matrix: min |pivot|={pivots.min():.3e} < {floor:.3e}, "
                         f"condition number={np.linalg.cond(scale):.3e}")
            raise NumericalError(f"Scale matrix is singular (min |pivot| {pivots.min():.3e})")
        object.__setattr__(self, "_lu", (lu, piv))
        log_det = float(np.sum(np.log(pivots)))
        object.__setattr__(self, "log_norm_const", log_det + 0.5 * mean.size * LOG_2PI)

    @classmethod
    def standard(cls, mean: Any) -> "GaussianParams":
        """Gaussian with the given mean and S = I."""
        mean = np.asarray(mean, dtype=float).reshape(-1)
        return cls(mean=mean, scale=np.eye(mean.size))

    @property
    def dim(self) -> int:
        return self.mean.size

    @property
    def covariance(self) -> np.ndarray:
        cov = self.scale @ self.scale.T
        return 0.5 * (cov + cov.T)

    @property
    def condition_number(self) -> float:
        return float(np.linalg.cond(self.scale))

    @property
    def scale_inv(self) -> np.ndarray:
        return lu_solve(self._lu, np.eye(self.dim))

    def whiten(self, x: Any) -> np.ndarray:
        """Return (x - mean) S^{-T} for a batch of rows; reconstructs z for reparameterized x."""
        u = as_rows(x, self.dim) - self.mean
        return lu_solve(self._lu, u.T).T

    def sample(self, z: Union[NoiseBatch, Any]) -> np.ndarray:
        zz = noise_array(z)
        if zz.shape[1] != self.dim:
            raise ValueError(f"Noise has {zz.shape[1]} columns, family has dimension {self.dim}")
        return self.mean + zz @ self.scale.T

    def log_density(self, x: Any) -> Union[float, np.ndarray]:
        w = self.whiten(x)
        values = -0.5 * np.sum(w * w, axis=1) - self.log_norm_const
        return squeeze_like(values, x)

    def score(self, x: Any) -> np.ndarray:
        w = self.whiten(x)
        values = -lu_solve(self._lu, w.T, trans=1).T
        return squeeze_like(values, x)

    def hessian(self) -> np.ndarray:
        s_inv = self.scale_inv
        return -(s_inv.T @ s_inv)

    def updated(self, grad: Any, lr: float) -> "GaussianParams":
        """Plain gradient-descent step theta - lr * grad."""
        return GaussianParams(mean=self.mean - lr * grad.d_mean, scale=self.scale - lr * grad.d_scale)

    def to_dict(self) -> Dict[str, Any]:
        return {"family": "gaussian", "mean": self.mean.tolist(), "scale": self.scale.tolist()}
