# src/flows/f_flow.py
"""
Probability-flow vector field of an f-divergence and the particle distillation step.
"""

import logging
from typing import Any, Tuple

import numpy as np

from src.divergences.f_divergence import FDivergence
from src.families.noise import noise_array, noise_seed
from src.gradients.grad_estimate import GradEstimate
from src.gradients.path import contract_jacobian, path_weights
from src.gradients.ratio import StopGradientRatio, check_samples
from src.targets.base import TargetDensity
from src.utils.errors import DomainError
from src.utils.utils import squeeze_like

logger = logging.getLogger(__name__)


def f_flow_vector_field(x: Any, q_params: Any, target: TargetDensity, divergence: FDivergence) -> np.ndarray:
    """
    v(x) = grad_x h(r(x)) = h'(r) r (score_p - score_q).

    r uses the normalized target when its normalizer is known. For reverse KL the
    weight is 1 and v = score_p - score_q.
    """
    ratio = StopGradientRatio(frozen_params=q_params, target=target, normalized=True)
    rows = np.atleast_2d(np.asarray(x, dtype=float))
    with np.errstate(over="ignore", invalid="ignore"):
        weights = check_samples("flow weight", divergence.path_weight_log(ratio.log_r(rows)))
    field = check_samples("flow field", weights[:, None] * ratio.grad_x_log_r(rows))
    return squeeze_like(field, x)


def distill_step(
    q_params: Any,
    target: TargetDensity,
    divergence: FDivergence,
    tau: float,
    z_batch: Any,
    ratio_shift: bool = True,
) -> Tuple[GradEstimate, np.ndarray]:
    """
    Move x' = x + tau * v(x) with the ratios frozen, then take the gradient of
    0.5 * mean ||x_theta - x'||^2 with x' held fixed.

    The field uses the same (optionally shifted) ratios as path_gradient, so the
    gradient is tau times the path-derivative gradient.

    Returns:
        (gradient, moved particles x').
    """
    if tau <= 0:
        raise DomainError(f"Distillation step size must be positive, got {tau}")
    z = noise_array(z_batch)
    x = q_params.sample(z)
    ratio = StopGradientRatio(frozen_params=q_params, target=target)
    weights, shift = path_weights(divergence, ratio.log_r(x), ratio_shift)
    velocity = weights[:, None] * ratio.grad_x_log_r(x)
    moved = x + tau * velocity
    moved.setflags(write=False)
    # x - x' formed without cancellation
    residual = check_samples("distillation residual", -tau * velocity)
    fields = contract_jacobian(q_params, residual, z, x)
    logger.debug(f"Distillation step {divergence.label}: tau={tau}, shift={shift:.6g}")
    return GradEstimate(sample_count=z.shape[0], seed=noise_seed(z_batch), shift=shift, **fields), moved
