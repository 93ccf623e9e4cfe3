# src/geometry/submersion.py
"""
Geometry of the submersion pi(S) = S S^T from nonsingular scale matrices onto SPD matrices.

Vertical space at S: {X : X S^T + S X^T = 0}; horizontal space: {X : X S^{-1} symmetric}.
"""

import logging
from dataclasses import dataclass
from typing import Any, Union

import numpy as np

from src.geometry.spd import SymmetricPD, symmetrize
from src.utils.errors import DomainError, NumericalError

logger = logging.getLogger(__name__)

HORIZONTAL_RTOL = 1e-6


def dpi(s: Any, x: Any) -> np.ndarray:
    """Differential of pi at S applied to X: X S^T + S X^T."""
    s = np.asarray(s, dtype=float)
    x = np.asarray(x, dtype=float)
    if s.shape != x.shape or s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise DomainError(f"dpi needs square matrices of equal shape, got {s.shape} and {x.shape}")
    return x @ s.T + s @ x.T


def lyapunov_solve(sigma: Union[SymmetricPD, Any], c: Any) -> np.ndarray:
    """
    Symmetric H with H Sigma + Sigma H = C, solved in the eigenbasis of Sigma:
    H~_ij = C~_ij / (lambda_i + lambda_j).
    """
    sigma = SymmetricPD.coerce(sigma)
    c = symmetrize(c)
    basis = sigma.eigvecs
    c_tilde = basis.T @ c @ basis
    h_tilde = c_tilde / (sigma.eigvals[:, None] + sigma.eigvals[None, :])
    return symmetrize(basis @ h_tilde @ basis.T)


def _sigma_of(s: np.ndarray) -> SymmetricPD:
    try:
        return SymmetricPD(symmetrize(s @ s.T))
    except NumericalError:
        logger.error("Scale matrix is singular; S S^T is not positive definite")
        raise NumericalError("Scale matrix is singular")


@dataclass(frozen=True, eq=False)
class TangentDecomposition:
    """X = horizontal + vertical with horizontal = H S, H symmetric."""

    horizontal: np.ndarray
    vertical: np.ndarray
    h: np.ndarray

    @property
    def vertical_fraction(self) -> float:
        total = np.linalg.norm(self.horizontal + self.vertical)
        return float(np.linalg.norm(self.vertical) / total) if total > 0 else 0.0


def horizontal_projection(s: Any, x: Any) -> TangentDecomposition:
    """
    Split X at S into horizontal H S and vertical X - H S, where H solves
    H Sigma + Sigma H = X S^T + S X^T.
    """
    s = np.asarray(s, dtype=float)
    x = np.asarray(x, dtype=float)
    sigma = _sigma_of(s)
    h = lyapunov_solve(sigma, dpi(s, x))
    horizontal = h @ s
    return TangentDecomposition(horizontal=horizontal, vertical=x - horizontal, h=h)


def _require_horizontal(s: np.ndarray, grad_s: np.ndarray) -> None:
    parts = horizontal_projection(s, grad_s)
    scale = np.linalg.norm(grad_s)
    if np.linalg.norm(parts.vertical) > HORIZONTAL_RTOL * max(scale, np.finfo(float).tiny):
        logger.error(f"Gradient has vertical fraction {parts.vertical_fraction:.3e}")
        raise DomainError("The scale gradient is not horizontal; the submersion identity does not apply")


def riemannian_grad_Q(s: Any, grad_s: Any) -> np.ndarray:
    """Covariance-space Riemannian gradient dpi_S(grad_S) of a horizontal scale gradient."""
    s = np.asarray(s, dtype=float)
    grad_s = np.asarray(grad_s, dtype=float)
    _require_horizontal(s, grad_s)
    return dpi(s, grad_s)


def riemannian_grad_BW(s: Any, grad_s: Any) -> np.ndarray:
    """Bures-Wasserstein gradient grad_S S^{-1} of a horizontal scale gradient."""
    s = np.asarray(s, dtype=float)
    grad_s = np.asarray(grad_s, dtype=float)
    _require_horizontal(s, grad_s)
    return np.linalg.solve(s.T, grad_s.T).T


def bures_inner(sigma: Union[SymmetricPD, Any], u: Any, v: Any) -> float:
    """Bures metric <U, V>_Sigma = tr(H_V Sigma H_U) with H solving the Lyapunov equations."""
    sigma = SymmetricPD.coerce(sigma)
    h_u = lyapunov_solve(sigma, u)
    h_v = lyapunov_solve(sigma, v)
    return float(np.trace(h_v @ sigma.matrix @ h_u))
