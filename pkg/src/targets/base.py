# src/targets/base.py
"""
Base class for target densities p(x), known up to a normalizing constant.
"""

import logging
from abc import ABC, abstractmethod
from typing import Any, Optional, Union

import numpy as np

from src.utils.errors import DomainError

logger = logging.getLogger(__name__)


class TargetDensity(ABC):
    """
    Unnormalized log-density with an analytic score.

    Points are row vectors; every method accepts a single point of shape (dim,) or a
    batch of shape (N, dim) and returns a scalar/row or a batch accordingly.
    `log_normalizer` is log C with C = integral of exp(log_density_unnorm), or None
    when unknown.
    """

    dim: int
    log_normalizer: Optional[float] = None
    has_hessian: bool = False

    @abstractmethod
    def log_density_unnorm(self, x: Any) -> Union[float, np.ndarray]:
        """Return log p(x) up to the additive constant log C."""

    @abstractmethod
    def score(self, x: Any) -> np.ndarray:
        """Return the gradient of log p at x."""

    def hessian(self, x: Any) -> np.ndarray:
        """Return the Hessian of log p at x, shape (dim, dim) or (N, dim, dim)."""
        logger.error(f"{self.__class__.__name__} has no Hessian")
        raise DomainError(f"{self.__class__.__name__} does not provide a Hessian")

    def log_density(self, x: Any) -> Union[float, np.ndarray]:
        """Normalized log-density; requires a known normalizer."""
        if self.log_normalizer is None:
            raise DomainError(f"{self.__class__.__name__} has no known normalizing constant")
        return self.log_density_unnorm(x) - self.log_normalizer


class ScaledTarget(TargetDensity):
    """The target C * p for a positive constant C, i.e. log p shifted by log C."""

    def __init__(self, base: TargetDensity, log_c: float) -> None:
        self.base = base
        self.log_c = float(log_c)
        self.dim = base.dim
        self.has_hessian = base.has_hessian
        self.log_normalizer = None if base.log_normalizer is None else base.log_normalizer + self.log_c

    def log_density_unnorm(self, x: Any) -> Union[float, np.ndarray]:
        return self.base.log_density_unnorm(x) + self.log_c

    def score(self, x: Any) -> np.ndarray:
        return self.base.score(x)

    def hessian(self, x: Any) -> np.ndarray:
        return self.base.hessian(x)
