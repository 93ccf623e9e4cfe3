# src/gradients/path.py
"""
Path-derivative (stop-gradient) estimator of f-divergence gradients.

Per sample the x-space vector g = -h'(r) r (score_p - score_q) is contracted through
the analytic reparameterization Jacobian; no differentiation framework is involved.
"""

import logging
from typing import Any, Dict, Optional, Tuple

import numpy as np

from src.divergences.f_divergence import FDivergence
from src.families.diagonal import DiagGaussianParams
from src.families.gaussian import GaussianParams
from src.families.noise import noise_array, noise_seed
from src.gradients.grad_estimate import GradEstimate
from src.gradients.ratio import StopGradientRatio, check_samples, ratio_shift
from src.targets.base import TargetDensity
from src.utils.errors import DomainError, NumericalError

logger = logging.getLogger(__name__)


def contract_jacobian(params: Any, g: np.ndarray, basis: np.ndarray, x: np.ndarray,
                      keep_per_sample: bool = False) -> Dict[str, Any]:
    """
    Contract per-sample x-gradients g (N, n) through dx/dtheta.

    Full Gaussian: d_mean = mean(g), d_scale = g^T basis / N with basis = z.
    Diagonal: d_mean = mean(g), d_log_std = mean(g * (x - mean)).
    """
    n_samples = g.shape[0]
    fields: Dict[str, Any] = {"d_mean": np.mean(g, axis=0)}
    per_sample: Optional[Dict[str, np.ndarray]] = None
    if isinstance(params, GaussianParams):
        fields["d_scale"] = g.T @ basis / n_samples
        if keep_per_sample:
            per_sample = {"d_mean": g, "d_scale": g[:, :, None] * basis[:, None, :]}
    elif isinstance(params, DiagGaussianParams):
        contrib = g * (x - params.mean)
        fields["d_log_std"] = np.mean(contrib, axis=0)
        if keep_per_sample:
            per_sample = {"d_mean": g, "d_log_std": contrib}
    else:
        raise DomainError(f"No reparameterization Jacobian for {type(params).__name__}")
    fields["per_sample"] = per_sample
    return fields


def shifted_log_ratios(log_r: np.ndarray, shift: bool) -> Tuple[np.ndarray, float]:
    """Return (log r - C, C) with C = max log r when shift is on, else (log r, 0.0)."""
    if not shift:
        return log_r, 0.0
    _, c = ratio_shift(log_r)
    return log_r - c, c


def path_weights(divergence: FDivergence, log_r: np.ndarray, shift: bool) -> Tuple[np.ndarray, float]:
    """
    Per-sample weights h'(r) r from (optionally shifted) log-ratios.

    Returns:
        (weights, shift applied).

    Raises:
        NumericalError: Weights overflow; without the shift the message advises enabling it.
    """
    logu, c = shifted_log_ratios(log_r, shift)
    with np.errstate(over="ignore", invalid="ignore"):
        weights = np.asarray(divergence.path_weight_log(logu), dtype=float)
    if not np.isfinite(weights).all():
        if not shift:
            logger.error(f"Ratio weights overflowed for {divergence.label} (max log r = {np.max(log_r):.3e})")
            raise NumericalError(f"Ratio weights overflowed for {divergence.label}; enable the ratio shift")
        check_samples("ratio weight", weights)
    return weights, c


def unshifted_surrogate(divergence: FDivergence, log_r: np.ndarray) -> Optional[float]:
    """
    Surrogate -mean h(r) on the raw log-ratios, comparable across steps whatever shift the
    gradient used. None when h(r) overflows.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        h_values = np.asarray(divergence.h_log(log_r), dtype=float)
    if not np.isfinite(h_values).all():
        logger.debug(f"Unshifted surrogate for {divergence.label} overflowed")
        return None
    return float(-np.mean(h_values))


def path_gradient(
    params: Any,
    target: TargetDensity,
    divergence: FDivergence,
    z_batch: Any,
    ratio_shift: bool = True,
    keep_per_sample: bool = False,
) -> GradEstimate:
    """
    Path-derivative gradient of D_f(p || q_theta).

    Args:
        params: GaussianParams or DiagGaussianParams.
        target: Target with a score; the normalizer is not needed.
        divergence: f-divergence quintuple.
        z_batch: NoiseBatch or (N, n) standard-normal array.
        ratio_shift: Exponentiate log r - max log r instead of log r.
        keep_per_sample: Retain per-sample contributions for variance diagnostics.

    Raises:
        NumericalError: Non-finite log-ratio or score at a sample, or overflow of the
            unshifted ratio weights.
    """
    z = noise_array(z_batch)
    x = params.sample(z)
    ratio = StopGradientRatio(frozen_params=params, target=target)
    log_r = ratio.log_r(x)
    weights, shift = path_weights(divergence, log_r, ratio_shift)
    g = -(weights[:, None] * ratio.grad_x_log_r(x))
    check_samples("path gradient", g)
    fields = contract_jacobian(params, g, z, x, keep_per_sample)
    surrogate = unshifted_surrogate(divergence, log_r)
    logger.debug(f"Path gradient {divergence.label}: N={z.shape[0]}, shift={shift:.6g}")
    return GradEstimate(sample_count=z.shape[0], seed=noise_seed(z_batch), shift=shift,
                        surrogate=surrogate, **fields)
