# src/families/diagonal.py
"""
Diagonal (mean-field) Gaussian family parameterized by mean and log standard deviation.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Union

import numpy as np

from src.families.gaussian import LOG_2PI
from src.families.noise import NoiseBatch, noise_array
from src.utils.errors import NumericalError
from src.utils.utils import as_rows, squeeze_like

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DiagGaussianParams:
    """Variational parameters theta = (mean, log_std); std = exp(log_std) > 0 by construction."""

    mean: np.ndarray
    log_std: np.ndarray
    log_norm_const: float = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        mean = np.array(self.mean, dtype=float).reshape(-1)
        log_std = np.array(self.log_std, dtype=float).reshape(-1)
        if mean.shape != log_std.shape:
            raise ValueError(f"mean {mean.shape} and log_std {log_std.shape} shapes differ")
        if not (np.isfinite(mean).all() and np.isfinite(log_std).all()):
            logger.error("Diagonal Gaussian parameters contain non-finite entries")
            raise NumericalError("Diagonal Gaussian parameters contain non-finite entries")
        mean.setflags(write=False)
        log_std.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "log_std", log_std)
        object.__setattr__(self, "log_norm_const", float(np.sum(log_std)) + 0.5 * mean.size * LOG_2PI)

    @classmethod
    def standard(cls, mean: Any) -> "DiagGaussianParams":
        mean = np.asarray(mean, dtype=float).reshape(-1)
        return cls(mean=mean, log_std=np.zeros_like(mean))

    @property
    def dim(self) -> int:
        return self.mean.size

    @property
    def std(self) -> np.ndarray:
        return np.exp(self.log_std)

    @property
    def scale(self) -> np.ndarray:
        return np.diag(self.std)

    @property
    def covariance(self) -> np.ndarray:
        return np.diag(self.std ** 2)

    def whiten(self, x: Any) -> np.ndarray:
        return (as_rows(x, self.dim) - self.mean) / self.std

    def sample(self, z: Union[NoiseBatch, Any]) -> np.ndarray:
        zz = noise_array(z)
        if zz.shape[1] != self.dim:
            raise ValueError(f"Noise has {zz.shape[1]} columns, family has dimension {self.dim}")
        return self.mean + zz * self.std

    def log_density(self, x: Any) -> Union[float, np.ndarray]:
        w = self.whiten(x)
        values = -0.5 * np.sum(w * w, axis=1) - self.log_norm_const
        return squeeze_like(values, x)

    def score(self, x: Any) -> np.ndarray:
        values = -(as_rows(x, self.dim) - self.mean) / self.std ** 2
        return squeeze_like(values, x)

    def hessian(self) -> np.ndarray:
        return -np.diag(np.exp(-2.0 * self.log_std))

    def updated(self, grad: Any, lr: float) -> "DiagGaussianParams":
        return DiagGaussianParams(mean=self.mean - lr * grad.d_mean, log_std=self.log_std - lr * grad.d_log_std)

    def to_dict(self) -> Dict[str, Any]:
        return {"family": "diag", "mean": self.mean.tolist(), "log_std": self.log_std.tolist()}
