# src/flows/bw_ode.py
"""
Right-hand sides of the Bures-Wasserstein gradient flow of KL(q || p) for Gaussian q.

Every function returns (d_mean, d_matrix). With a noise batch the expectations are
Monte Carlo averages over x = mean + z S^T; with z_batch=None they are evaluated in
closed form, which requires a Gaussian target.
"""

import logging
from typing import Any, Optional, Tuple

import numpy as np

from src.families.noise import noise_array
from src.flows.state import COV, SCALE, FlowState
from src.gradients.closed_form import expected_target_hessian
from src.gradients.ratio import StopGradientRatio, check_samples
from src.targets.base import TargetDensity
from src.targets.gaussian import GaussianTarget
from src.utils.errors import DomainError

logger = logging.getLogger(__name__)

Rhs = Tuple[np.ndarray, np.ndarray]


def _gaussian_target(target: TargetDensity) -> GaussianTarget:
    if not isinstance(target, GaussianTarget):
        raise DomainError("Closed-form expectations need a Gaussian target; pass a noise batch")
    return target


def _analytic_mean(state: FlowState, target: GaussianTarget) -> np.ndarray:
    return (target.mean - state.mean) @ target.precision


def _samples(state: FlowState, z_batch: Any) -> Tuple[np.ndarray, np.ndarray]:
    z = noise_array(z_batch)
    return z, state.params.sample(z)


def _symmetrized(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.T)


def bw_rhs_hessian_free(state: FlowState, target: TargetDensity, z_batch: Optional[Any] = None) -> Rhs:
    """
    d_mean = E[grad log(p/q)], d_cov = A + A^T with A = E[grad log(p/q)^T (x - mean)].

    Scale-variant states are accepted and sampled through their own S, so the result can
    be compared with scale_rhs on shared samples.
    """
    if z_batch is None:
        gauss = _gaussian_target(target)
        a = np.eye(state.dim) - gauss.precision @ state.cov
        return _analytic_mean(state, gauss), a + a.T
    z, x = _samples(state, z_batch)
    delta = check_samples("score difference", StopGradientRatio(state.params, target).grad_x_log_r(x))
    a = delta.T @ (x - state.mean) / z.shape[0]
    return np.mean(delta, axis=0), a + a.T


def bw_rhs_hessian(state: FlowState, target: TargetDensity, z_batch: Optional[Any] = None) -> Rhs:
    """
    d_mean = -E[grad V], d_cov = 2I - cov E[hess V] - E[hess V] cov with V = -log p.

    Deterministic for Gaussian targets; other targets need a Hessian and a noise batch.
    """
    if isinstance(target, GaussianTarget):
        d_mean = _analytic_mean(state, target)
        hess_v = target.precision
    else:
        if not target.has_hessian:
            raise DomainError(f"{target.__class__.__name__} does not provide a Hessian")
        if z_batch is None:
            raise DomainError("A noise batch is needed for Monte Carlo Hessian expectations")
        _, x = _samples(state, z_batch)
        d_mean = np.mean(check_samples("target score", target.score(x)), axis=0)
        hess_v = -expected_target_hessian(state.params, target, z_batch)
    cov = state.cov
    return d_mean, _symmetrized(2.0 * np.eye(state.dim) - cov @ hess_v - hess_v @ cov)


def sarkka_rhs(state: FlowState, target: TargetDensity, z_batch: Optional[Any] = None) -> Rhs:
    """d_mean = -E[grad V], d_cov = 2I - (B + B^T) with B = E[grad V^T (x - mean)]."""
    eye = np.eye(state.dim)
    if z_batch is None:
        gauss = _gaussian_target(target)
        b = gauss.precision @ state.cov
        return _analytic_mean(state, gauss), 2.0 * eye - (b + b.T)
    z, x = _samples(state, z_batch)
    score_p = check_samples("target score", np.atleast_2d(target.score(x)))
    b = -score_p.T @ (x - state.mean) / z.shape[0]
    return np.mean(score_p, axis=0), 2.0 * eye - (b + b.T)


def scale_rhs(state: FlowState, target: TargetDensity, z_batch: Optional[Any] = None) -> Rhs:
    """
    d_mean = E[grad log(p/q)], d_S = E[grad log(p/q)^T (x - mean) S^{-T}] = E[grad log(p/q)^T z].

    Closed form for Gaussian targets: d_S = S^{-T} - P S with P the target precision.
    """
    if state.variant != SCALE:
        raise DomainError("scale_rhs needs a scale-variant state")
    params = state.params
    if z_batch is None:
        gauss = _gaussian_target(target)
        return _analytic_mean(state, gauss), params.scale_inv.T - gauss.precision @ params.scale
    z, x = _samples(state, z_batch)
    delta = check_samples("score difference", StopGradientRatio(params, target).grad_x_log_r(x))
    return np.mean(delta, axis=0), delta.T @ z / z.shape[0]


RHS_FORMS = {
    "hessian_free": bw_rhs_hessian_free,
    "hessian": bw_rhs_hessian,
    "sarkka": sarkka_rhs,
    "scale": scale_rhs,
}


def covariance_rhs_variant(name: str) -> str:
    """State variant a named RHS form integrates."""
    if name not in RHS_FORMS:
        raise DomainError(f"Unknown RHS form '{name}'; expected one of {', '.join(RHS_FORMS)}")
    return SCALE if name == "scale" else COV
