# src/geometry/__init__.py
"""
Bures-Wasserstein geometry: SPD square roots, Gaussian W2, optimal-transport maps,
geodesics, the submersion S -> S S^T and empirical Gaussian fits.
"""

from .bures import (
    bures_distance,
    bures_distance_sq,
    gaussian_moments,
    geodesic,
    horizontal_lift_geodesic,
    ot_map,
    w2_gaussian,
)
from .empirical import EmpiricalFit, empirical_gaussian_fit
from .spd import SymmetricPD, spectral_map, sqrtm_psd, symmetrize, symmetry_residual
from .submersion import (
    TangentDecomposition,
    bures_inner,
    dpi,
    horizontal_projection,
    lyapunov_solve,
    riemannian_grad_BW,
    riemannian_grad_Q,
)

__all__ = [
    "EmpiricalFit",
    "SymmetricPD",
    "TangentDecomposition",
    "bures_distance",
    "bures_distance_sq",
    "bures_inner",
    "dpi",
    "empirical_gaussian_fit",
    "gaussian_moments",
    "geodesic",
    "horizontal_lift_geodesic",
    "horizontal_projection",
    "lyapunov_solve",
    "ot_map",
    "riemannian_grad_BW",
    "riemannian_grad_Q",
    "spectral_map",
    "sqrtm_psd",
    "symmetrize",
    "symmetry_residual",
    "w2_gaussian",
]
