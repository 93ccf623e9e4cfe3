# src/gradients/scaling.py
"""
Check of how a target normalizing constant scales path-derivative gradients.
"""

import logging
from typing import Any

import numpy as np

from src.divergences.f_divergence import FDivergence
from src.gradients.path import path_gradient
from src.targets.base import ScaledTarget, TargetDensity
from src.utils.errors import DomainError

logger = logging.getLogger(__name__)


def normalizer_scaling_check(
    divergence: FDivergence,
    params: Any,
    target: TargetDensity,
    z_batch: Any,
    scale_c: float,
) -> float:
    """
    Compare path gradients for p and C p, both without the ratio shift.

    grad(C p) must equal C^alpha_exponent * grad(p); reverse KL is invariant bit for bit.

    Returns:
        max |grad(C p) - C^a grad(p)| / max |C^a grad(p)|, or the absolute deviation when
        the baseline gradient is zero.
    """
    if scale_c <= 0 or not np.isfinite(scale_c):
        raise DomainError(f"Scale C must be positive and finite, got {scale_c}")
    if getattr(divergence, "alpha_exponent", None) is None:
        raise DomainError(f"Divergence {divergence.name} has no normalizer scaling exponent")

    baseline = path_gradient(params, target, divergence, z_batch, ratio_shift=False).flat()
    scaled_target = ScaledTarget(target, float(np.log(scale_c)))
    scaled = path_gradient(params, scaled_target, divergence, z_batch, ratio_shift=False).flat()
    expected = baseline if divergence.alpha_exponent == 0 else scale_c ** divergence.alpha_exponent * baseline
    deviation = float(np.max(np.abs(scaled - expected))) if scaled.size else 0.0
    denom = float(np.max(np.abs(expected))) if expected.size else 0.0
    result = deviation / denom if denom > 0 else deviation
    logger.info(f"Normalizer scaling check {divergence.label}, C={scale_c:g}: deviation {result:.3e}")
    return result
