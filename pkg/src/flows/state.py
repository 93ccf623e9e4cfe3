# src/flows/state.py
"""
Flow states: Gaussian states in covariance or scale coordinates, and particle clouds.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
from scipy.linalg import LinAlgError, cholesky

from src.config.config import SYMMETRY_TOL
from src.families.gaussian import GaussianParams
from src.utils.errors import DomainError, NumericalError

logger = logging.getLogger(__name__)

COV = "cov"
SCALE = "scale"


@dataclass(frozen=True, eq=False)
class FlowState:
    """
    Gaussian state (mean, cov) or (mean, scale) at flow time t.

    The covariance variant must be symmetric positive definite, the scale variant
    nonsingular. Both expose the internal GaussianParams used to draw samples: the
    lower Cholesky factor for covariances, S itself for scales.
    """

    mean: np.ndarray
    variant: str
    matrix: np.ndarray
    t: float = 0.0
    params: GaussianParams = field(init=False, repr=False)

    def __post_init__(self) -> None:
        mean = np.array(self.mean, dtype=float).reshape(-1)
        matrix = np.array(self.matrix, dtype=float).reshape(mean.size, mean.size)
        if self.variant not in (COV, SCALE):
            raise DomainError(f"Unknown flow state variant '{self.variant}'")
        if self.t < 0:
            raise DomainError(f"Flow time must be non-negative, got {self.t}")
        if self.variant == COV:
            asym = float(np.max(np.abs(matrix - matrix.T)))
            if asym > SYMMETRY_TOL * max(1.0, float(np.max(np.abs(matrix)))):
                logger.error(f"Covariance asymmetry {asym:.3e} exceeds tolerance")
                raise NumericalError(f"Covariance is not symmetric (residual {asym:.3e})")
            try:
                factor = cholesky(matrix, lower=True)
            except (LinAlgError, ValueError) as e:
                logger.error(f"Covariance lost positive-definiteness: {e}")
                raise NumericalError("Covariance is not positive definite")
        else:
            factor = matrix
        mean.setflags(write=False)
        matrix.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "params", GaussianParams(mean=mean, scale=factor))

    @classmethod
    def from_covariance(cls, mean: Any, cov: Any, t: float = 0.0) -> "FlowState":
        return cls(mean=mean, variant=COV, matrix=cov, t=t)

    @classmethod
    def from_scale(cls, mean: Any, scale: Any, t: float = 0.0) -> "FlowState":
        return cls(mean=mean, variant=SCALE, matrix=scale, t=t)

    @classmethod
    def from_params(cls, params: GaussianParams, variant: str = SCALE, t: float = 0.0) -> "FlowState":
        matrix = params.scale if variant == SCALE else params.covariance
        return cls(mean=params.mean, variant=variant, matrix=matrix, t=t)

    @property
    def dim(self) -> int:
        return self.mean.size

    @property
    def cov(self) -> np.ndarray:
        return self.matrix if self.variant == COV else self.params.covariance

    @property
    def scale(self) -> np.ndarray:
        return self.params.scale

    def advanced(self, d_mean: np.ndarray, d_matrix: np.ndarray, tau: float) -> "FlowState":
        """One forward-Euler update; covariance states are re-symmetrized."""
        matrix = self.matrix + tau * d_matrix
        if self.variant == COV:
            matrix = 0.5 * (matrix + matrix.T)
        return FlowState(mean=self.mean + tau * d_mean, variant=self.variant, matrix=matrix, t=self.t + tau)

    def to_dict(self) -> Dict[str, Any]:
        return {"variant": self.variant, "t": self.t, "mean": self.mean.tolist(), self.variant: self.matrix.tolist()}


@dataclass(frozen=True, eq=False)
class ParticleCloud:
    """Particle positions (M, n) at time t, with the seed and step that produced them."""

    positions: np.ndarray
    time: float = 0.0
    seed: Optional[int] = None
    step: int = 0

    def __post_init__(self) -> None:
        positions = np.array(self.positions, dtype=float)
        if positions.ndim != 2:
            raise DomainError(f"Particle positions must be (M, n), got shape {positions.shape}")
        if not np.isfinite(positions).all():
            bad = int(np.flatnonzero(~np.isfinite(positions).all(axis=1))[0])
            logger.error(f"Particle {bad} left the finite range at step {self.step}")
            raise NumericalError(f"Non-finite particle position (particle {bad})", step=self.step)
        positions.setflags(write=False)
        object.__setattr__(self, "positions", positions)

    @property
    def n_particles(self) -> int:
        return self.positions.shape[0]

    @property
    def dim(self) -> int:
        return self.positions.shape[1]
