# src/geometry/bures.py
"""
Bures-Wasserstein distance, optimal-transport maps and geodesics between Gaussians.
"""

import logging
from typing import Any, Tuple, Union

import numpy as np

from src.geometry.spd import SymmetricPD, spectral_map, symmetrize
from src.utils.errors import DomainError, NumericalError

logger = logging.getLogger(__name__)

SPDLike = Union[SymmetricPD, Any]

# Rounding tolerance below zero for squared distances
NEGATIVE_CLIP = 1e-10
OT_MAX_CONDITION = 1e12


def _pair(a: SPDLike, b: SPDLike) -> Tuple[SymmetricPD, SymmetricPD]:
    a, b = SymmetricPD.coerce(a), SymmetricPD.coerce(b)
    if a.dim != b.dim:
        raise DomainError(f"Dimension mismatch: {a.dim} vs {b.dim}")
    return a, b


def _cross_sqrt(a: SymmetricPD, b: SymmetricPD) -> Tuple[np.ndarray, np.ndarray]:
    """Return (A^{1/2}, (A^{1/2} B A^{1/2})^{1/2})."""
    a_half = a.sqrt()
    return a_half, spectral_map(symmetrize(a_half @ b.matrix @ a_half), np.sqrt, "cross product")


def bures_distance_sq(a: SPDLike, b: SPDLike) -> float:
    """
    Squared Bures distance tr(A + B - 2 (A^{1/2} B A^{1/2})^{1/2}).

    Rounding below zero down to -1e-10 is clipped to 0.
    """
    a, b = _pair(a, b)
    if np.array_equal(a.matrix, b.matrix):
        return 0.0
    _, cross = _cross_sqrt(a, b)
    value = float(np.trace(a.matrix) + np.trace(b.matrix) - 2.0 * np.trace(cross))
    if value < 0:
        if value < -NEGATIVE_CLIP * max(1.0, float(np.trace(a.matrix) + np.trace(b.matrix))):
            logger.error(f"Squared Bures distance {value:.3e} is negative beyond rounding")
            raise NumericalError(f"Squared Bures distance is negative ({value:.3e})")
        value = 0.0
    return value


def bures_distance(a: SPDLike, b: SPDLike) -> float:
    return float(np.sqrt(bures_distance_sq(a, b)))


def gaussian_moments(value: Any) -> Tuple[np.ndarray, np.ndarray]:
    """
    Extract (mean, covariance) from a (mean, cov) pair or from any object exposing
    `mean` and `covariance` (or `cov`).
    """
    if isinstance(value, tuple) and len(value) == 2:
        mean, cov = value
    elif hasattr(value, "mean") and hasattr(value, "covariance"):
        mean, cov = value.mean, value.covariance
    elif hasattr(value, "mean") and hasattr(value, "cov"):
        mean, cov = value.mean, value.cov
    else:
        raise DomainError(f"Cannot read Gaussian moments from {type(value).__name__}")
    mean = np.asarray(mean, dtype=float).reshape(-1)
    cov = np.asarray(cov.matrix if isinstance(cov, SymmetricPD) else cov, dtype=float).reshape(mean.size, mean.size)
    return mean, cov


def w2_gaussian(q: Any, p: Any) -> float:
    """W2 between Gaussians: sqrt(||mean_q - mean_p||^2 + B^2(cov_q, cov_p))."""
    mean_q, cov_q = gaussian_moments(q)
    mean_p, cov_p = gaussian_moments(p)
    if mean_q.size != mean_p.size:
        raise DomainError(f"Dimension mismatch: {mean_q.size} vs {mean_p.size}")
    mean_term = float(np.sum((mean_q - mean_p) ** 2))
    return float(np.sqrt(mean_term + bures_distance_sq(cov_q, cov_p)))


def ot_map(a: SPDLike, b: SPDLike) -> np.ndarray:
    """
    Optimal transport map T = A^{-1/2} (A^{1/2} B A^{1/2})^{1/2} A^{-1/2} pushing N(0, A) to N(0, B).

    Raises:
        NumericalError: A is too ill-conditioned to invert its square root.
    """
    a, b = _pair(a, b)
    if a.condition_number > OT_MAX_CONDITION:
        logger.error(f"Source covariance condition number {a.condition_number:.3e} is too large")
        raise NumericalError(f"Source covariance is near-singular (condition {a.condition_number:.3e})")
    _, cross = _cross_sqrt(a, b)
    a_inv_half = a.inv_sqrt()
    return symmetrize(a_inv_half @ cross @ a_inv_half)


def _check_t(t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"Geodesic parameter must lie in [0, 1], got {t}")
    return t


def _interpolant(a: SymmetricPD, b: SymmetricPD, t: float) -> np.ndarray:
    eye = np.eye(a.dim)
    return (1.0 - t) * eye + t * ot_map(a, b)


def geodesic(a: SPDLike, b: SPDLike, t: float) -> SymmetricPD:
    """Sigma_t = M_t A M_t with M_t = (1 - t) I + t T; the endpoints are returned as given."""
    t = _check_t(t)
    a, b = _pair(a, b)
    if t == 0.0:
        return a
    if t == 1.0:
        return b
    m_t = _interpolant(a, b, t)
    return SymmetricPD(symmetrize(m_t @ a.matrix @ m_t))


def horizontal_lift_geodesic(a: SPDLike, b: SPDLike, t: float) -> np.ndarray:
    """Scale-space lift S_t = M_t A^{1/2}, with S_t S_t^T = Sigma_t."""
    t = _check_t(t)
    a, b = _pair(a, b)
    return _interpolant(a, b, t) @ a.sqrt()
