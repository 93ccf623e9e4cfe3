# src/gradients/closed_form.py
"""
Closed-form reverse-KL gradients for the full Gaussian family.
"""

import logging
from typing import Any, Optional

import numpy as np

from src.families.gaussian import GaussianParams
from src.families.noise import noise_array, noise_seed
from src.gradients.grad_estimate import GradEstimate
from src.gradients.path import contract_jacobian
from src.gradients.ratio import StopGradientRatio, check_samples
from src.targets.base import TargetDensity
from src.targets.gaussian import GaussianTarget
from src.utils.errors import DomainError

logger = logging.getLogger(__name__)


def _require_gaussian(params: Any) -> GaussianParams:
    if not isinstance(params, GaussianParams):
        raise DomainError(f"Closed-form Gaussian gradients need GaussianParams, got {type(params).__name__}")
    return params


def gaussian_closed_form_path_gradient(
    params: GaussianParams,
    target: TargetDensity,
    z_batch: Any,
    reconstruct: bool = False,
) -> GradEstimate:
    """
    Evaluate grad_mean KL = -E[grad_x log(p/q)] and grad_S KL = -E[grad_x log(p/q)^T (x - mean) S^{-T}].

    Args:
        params: Full Gaussian parameters.
        target: Target with a score.
        z_batch: Noise used to draw x = mean + z S^T.
        reconstruct: Recompute (x - mean) S^{-T} by a solve instead of reusing z.

    Raises:
        DomainError: params is not a full Gaussian.
        NumericalError: Singular scale or non-finite score.
    """
    params = _require_gaussian(params)
    z = noise_array(z_batch)
    x = params.sample(z)
    ratio = StopGradientRatio(frozen_params=params, target=target)
    delta = check_samples("score difference", ratio.grad_x_log_r(x))
    basis = params.whiten(x) if reconstruct else z
    fields = contract_jacobian(params, -delta, basis, x)
    return GradEstimate(sample_count=z.shape[0], seed=noise_seed(z_batch), **fields)


def expected_target_hessian(params: GaussianParams, target: TargetDensity, z_batch: Optional[Any] = None) -> np.ndarray:
    """E_q[hessian log p]; exact for Gaussian targets, Monte Carlo otherwise."""
    if not target.has_hessian:
        logger.error(f"{target.__class__.__name__} has no Hessian")
        raise DomainError(f"{target.__class__.__name__} does not provide a Hessian")
    if isinstance(target, GaussianTarget):
        return -target.precision
    if z_batch is None:
        raise DomainError("A noise batch is needed for Monte Carlo Hessian expectations")
    x = params.sample(noise_array(z_batch))
    hessians = check_samples("target Hessian", np.asarray(target.hessian(x)).reshape(x.shape[0], params.dim, params.dim))
    return np.mean(hessians, axis=0)


def hessian_form_scale_gradient(params: GaussianParams, target: TargetDensity, z_batch: Optional[Any] = None) -> np.ndarray:
    """
    Return grad_S KL = -E[hessian log p] S - S^{-T}.

    The result is horizontal (its product with S^{-1} is symmetric) when the
    expectation is exact.
    """
    params = _require_gaussian(params)
    expected = expected_target_hessian(params, target, z_batch)
    return -expected @ params.scale - params.scale_inv.T
