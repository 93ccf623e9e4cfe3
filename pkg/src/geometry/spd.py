# src/geometry/spd.py
"""
Symmetric positive-definite matrices with a cached eigendecomposition, and spectral
matrix functions (square root, inverse square root) built on it.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Union

import numpy as np
from scipy.linalg import eigh

from src.config.config import SYMMETRY_TOL
from src.utils.errors import DomainError, NumericalError

logger = logging.getLogger(__name__)

# Negative eigenvalues down to this fraction of the spectral radius are rounding noise
PSD_CLIP_RTOL = 1e-10


def symmetrize(matrix: Any) -> np.ndarray:
    m = np.asarray(matrix, dtype=float)
    return 0.5 * (m + m.T)


def symmetry_residual(matrix: Any) -> float:
    m = np.asarray(matrix, dtype=float)
    return float(np.max(np.abs(m - m.T))) if m.size else 0.0


def _check_symmetric(m: np.ndarray, name: str) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"{name} must be a square matrix, got shape {m.shape}")
    residual = symmetry_residual(m)
    if residual > SYMMETRY_TOL * max(1.0, float(np.max(np.abs(m)))):
        logger.error(f"{name} symmetry residual {residual:.3e} exceeds {SYMMETRY_TOL:g}")
        raise DomainError(f"{name} is not symmetric (residual {residual:.3e})")


def spectral_map(matrix: Any, fn: Callable[[np.ndarray], np.ndarray], name: str = "matrix") -> np.ndarray:
    """
    Apply fn to the eigenvalues of a symmetric PSD matrix: V fn(clip(lambda)) V^T.

    Eigenvalues in [-1e-10 * max|lambda|, 0) are clipped to 0.

    Raises:
        DomainError: Not symmetric, or an eigenvalue below the clipping floor.
    """
    m = np.asarray(matrix, dtype=float)
    _check_symmetric(m, name)
    eigvals, eigvecs = eigh(symmetrize(m))
    floor = -PSD_CLIP_RTOL * max(float(np.max(np.abs(eigvals))), np.finfo(float).tiny)
    if eigvals.min() < floor:
        logger.error(f"{name} has eigenvalue {eigvals.min():.3e} below the PSD floor {floor:.3e}")
        raise DomainError(f"{name} is not positive semi-definite (min eigenvalue {eigvals.min():.3e})")
    clipped = np.maximum(eigvals, 0.0)
    return symmetrize((eigvecs * fn(clipped)) @ eigvecs.T)


@dataclass(frozen=True, eq=False)
class SymmetricPD:
    """Symmetric positive-definite matrix; eigenvalues ascending, eigenvectors in columns."""

    matrix: np.ndarray
    eigvals: np.ndarray = field(init=False, repr=False)
    eigvecs: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=float)
        _check_symmetric(m, "SPD matrix")
        m = symmetrize(m)
        eigvals, eigvecs = eigh(m)
        if not (np.isfinite(eigvals).all() and eigvals.min() > 0):
            logger.error(f"Matrix is not positive definite: min eigenvalue {eigvals.min():.3e}")
            raise NumericalError(f"Matrix is not positive definite (min eigenvalue {eigvals.min():.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "eigvals", eigvals)
        object.__setattr__(self, "eigvecs", eigvecs)

    @classmethod
    def coerce(cls, value: Union["SymmetricPD", Any]) -> "SymmetricPD":
        return value if isinstance(value, SymmetricPD) else cls(np.atleast_2d(np.asarray(value, dtype=float)))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigmin(self) -> float:
        return float(self.eigvals[0])

    @property
    def condition_number(self) -> float:
        return float(self.eigvals[-1] / self.eigvals[0])

    def apply(self, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        return symmetrize((self.eigvecs * fn(self.eigvals)) @ self.eigvecs.T)

    def sqrt(self) -> np.ndarray:
        return self.apply(np.sqrt)

    def inv_sqrt(self) -> np.ndarray:
        return self.apply(lambda lam: 1.0 / np.sqrt(lam))

    def inverse(self) -> np.ndarray:
        return self.apply(lambda lam: 1.0 / lam)


def sqrtm_psd(a: Union[SymmetricPD, Any]) -> SymmetricPD:
    """
    Symmetric square root R with R R = A via the symmetric eigendecomposition.

    Raises:
        DomainError: A not symmetric or eigenvalues below -1e-10 * ||A||.
        NumericalError: The root is singular (A only semi-definite).
    """
    if isinstance(a, SymmetricPD):
        return SymmetricPD(a.sqrt())
    return SymmetricPD(spectral_map(np.atleast_2d(a), np.sqrt, "sqrtm input"))
