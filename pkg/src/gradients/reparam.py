# src/gradients/reparam.py
"""
Reparameterization gradients: the path term plus the explicit theta-dependence of log q.
"""

import logging
from typing import Any, Dict

import numpy as np

from src.divergences.f_divergence import FDivergence
from src.families.diagonal import DiagGaussianParams
from src.families.gaussian import GaussianParams
from src.families.noise import noise_array, noise_seed
from src.gradients.grad_estimate import GradEstimate
from src.gradients.path import contract_jacobian, shifted_log_ratios
from src.gradients.ratio import StopGradientRatio, check_samples
from src.targets.base import TargetDensity
from src.utils.errors import DomainError

logger = logging.getLogger(__name__)


def explicit_score_terms(params: Any, x: np.ndarray, z: np.ndarray) -> Dict[str, np.ndarray]:
    """
    Per-sample gradient of log q(x; theta) in theta with x held fixed.

    Full Gaussian: d/dmean = -score_q, d/dS = outer(-score_q, z) - S^{-T}.
    Diagonal: d/dmean = (x - mean)/std^2, d/dlog_std = ((x - mean)/std)^2 - 1.
    """
    if isinstance(params, GaussianParams):
        neg_score = -np.atleast_2d(params.score(x))
        return {
            "d_mean": neg_score,
            "d_scale": neg_score[:, :, None] * z[:, None, :] - params.scale_inv.T[None, :, :],
        }
    if isinstance(params, DiagGaussianParams):
        u = (x - params.mean) / params.std
        return {"d_mean": u / params.std, "d_log_std": u * u - 1.0}
    raise DomainError(f"No explicit score term for {type(params).__name__}")


def score_term_mean(params: Any, x: np.ndarray, z: np.ndarray) -> Dict[str, np.ndarray]:
    """Monte Carlo mean of explicit_score_terms; zero in expectation."""
    return {k: np.mean(v, axis=0) for k, v in explicit_score_terms(params, x, z).items()}


def _assemble(params: Any, weights: np.ndarray, x: np.ndarray, z: np.ndarray, ratio: StopGradientRatio,
              keep_per_sample: bool) -> Dict[str, Any]:
    # d/dtheta of -w log r(x_theta; theta) with w held fixed
    g = -(weights[:, None] * ratio.grad_x_log_r(x))
    check_samples("reparameterization gradient", g)
    fields = contract_jacobian(params, g, z, x, keep_per_sample)
    explicit = explicit_score_terms(params, x, z)
    for name, terms in explicit.items():
        weighted = weights.reshape((-1,) + (1,) * (terms.ndim - 1)) * terms
        fields[name] = fields[name] + np.mean(weighted, axis=0)
        if keep_per_sample:
            fields["per_sample"][name] = fields["per_sample"][name] + weighted
    return fields


def reparam_gradient_kl(params: Any, target: TargetDensity, z_batch: Any,
                        keep_per_sample: bool = False) -> GradEstimate:
    """
    Reparameterization gradient of KL(q || p), the black-box VI estimator.

    The target normalizer is not needed. The surrogate records the Monte Carlo
    mean of log q - log p on the same samples.

    Raises:
        NumericalError: Non-finite log p or score at a sample (names the sample index).
    """
    z = noise_array(z_batch)
    x = params.sample(z)
    ratio = StopGradientRatio(frozen_params=params, target=target)
    log_r = ratio.log_r(x)
    fields = _assemble(params, np.ones(z.shape[0]), x, z, ratio, keep_per_sample)
    logger.debug(f"Reparameterization KL gradient: N={z.shape[0]}")
    return GradEstimate(sample_count=z.shape[0], seed=noise_seed(z_batch),
                        surrogate=float(-np.mean(log_r)), **fields)


def reparam_gradient_f(
    params: Any,
    target: TargetDensity,
    divergence: FDivergence,
    z_batch: Any,
    ratio_shift: bool = True,
    keep_per_sample: bool = False,
) -> GradEstimate:
    """
    Reparameterization gradient of D_f(p || q) = E_q[f(r)] for a general f.

    The per-sample weight f'(r) r multiplies grad_theta log r through both the path and the
    explicit dependence. Without the ratio shift the target must be normalized (the
    reverse KL weight is constant and needs no normalizer).

    Raises:
        DomainError: Unshifted ratios on a target with no known normalizer.
    """
    if not ratio_shift and divergence.name != "reverse_kl" and target.log_normalizer is None:
        raise DomainError("Unshifted reparameterization gradients require a normalized target")
    z = noise_array(z_batch)
    x = params.sample(z)
    ratio = StopGradientRatio(frozen_params=params, target=target, normalized=True)
    log_r = ratio.log_r(x)
    logu, shift = shifted_log_ratios(log_r, ratio_shift)
    with np.errstate(over="ignore", invalid="ignore"):
        weights = check_samples("ratio weight", divergence.reparam_weight_log(logu))
        objective = np.asarray(divergence.f_log(log_r), dtype=float)
    # grad f(r) = f'(r) r grad log r, i.e. the -log r assembly weighted by -f'(r) r
    fields = _assemble(params, -weights, x, z, ratio, keep_per_sample)
    surrogate = float(np.mean(objective)) if np.isfinite(objective).all() else None
    logger.debug(f"Reparameterization gradient {divergence.label}: N={z.shape[0]}, shift={shift:.6g}")
    return GradEstimate(sample_count=z.shape[0], seed=noise_seed(z_batch), shift=shift,
                        surrogate=surrogate, **fields)
