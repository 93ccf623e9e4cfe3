# src/gradients/gmm.py
"""
Surrogate gradient for Gaussian-mixture variational families.

The objective is L = -sum_k m_k l_k with l_k = (1/N) sum_i h(r(x_ki)), where x_ki are
reparameterized draws from component k and r uses the full mixture density with all
parameters frozen. Gradients use the globally shifted ratios; the reported surrogate is
evaluated on the raw ratios.
"""

import logging
from typing import Any, List, Sequence

import numpy as np

from src.divergences.f_divergence import FDivergence
from src.families.mixture import MixtureParams
from src.families.noise import noise_array, noise_seed
from src.gradients.grad_estimate import GradEstimate
from src.gradients.path import contract_jacobian, unshifted_surrogate
from src.gradients.ratio import StopGradientRatio, check_samples
from src.targets.base import TargetDensity
from src.utils.errors import DomainError, NumericalError

logger = logging.getLogger(__name__)


def gmm_surrogate_gradient(
    params: MixtureParams,
    target: TargetDensity,
    divergence: FDivergence,
    z_batches: Sequence[Any],
    ratio_shift: bool = True,
) -> GradEstimate:
    """
    Gradient of the mixture surrogate objective.

    Args:
        params: Mixture with K >= 1 components.
        target: Target with a score.
        divergence: f-divergence quintuple.
        z_batches: K independent noise batches, one per component.
        ratio_shift: Shift every log-ratio by the maximum over all components' samples.

    Returns:
        GradEstimate with d_logits and one component GradEstimate (already weighted by m_k) each.
    """
    if not isinstance(params, MixtureParams):
        raise DomainError(f"gmm_surrogate_gradient needs MixtureParams, got {type(params).__name__}")
    if len(z_batches) != params.n_components:
        raise DomainError(f"{len(z_batches)} noise batches for {params.n_components} components")

    ratio = StopGradientRatio(frozen_params=params, target=target)
    noises: List[np.ndarray] = []
    samples: List[np.ndarray] = []
    log_ratios: List[np.ndarray] = []
    for k, batch in enumerate(z_batches):
        z = noise_array(batch)
        x = params.component_sample(k, z)
        noises.append(z)
        samples.append(x)
        log_ratios.append(ratio.log_r(x))

    shift = float(max(np.max(lr) for lr in log_ratios)) if ratio_shift else 0.0
    weights = params.weights
    ell = np.empty(params.n_components)
    components = []
    for k, component in enumerate(params.components):
        logu = log_ratios[k] - shift
        with np.errstate(over="ignore", invalid="ignore"):
            path_w = np.asarray(divergence.path_weight_log(logu), dtype=float)
            h_vals = np.asarray(divergence.h_log(logu), dtype=float)
        if not (np.isfinite(path_w).all() and np.isfinite(h_vals).all()):
            logger.error(f"Ratio weights overflowed in component {k} for {divergence.label}")
            raise NumericalError(f"Ratio weights overflowed in component {k}; enable the ratio shift")
        ell[k] = np.mean(h_vals)
        g = -weights[k] * (path_w[:, None] * ratio.grad_x_log_r(samples[k]))
        check_samples(f"component {k} gradient", g)
        fields = contract_jacobian(component, g, noises[k], samples[k])
        fields.pop("per_sample")
        components.append(GradEstimate(sample_count=noises[k].shape[0],
                                       seed=noise_seed(z_batches[k]), shift=shift, **fields))

    d_logits = weights * (-ell + np.dot(weights, ell))
    # the logits use the shifted l_k; the reported value undoes the shift
    raw = [unshifted_surrogate(divergence, lr) for lr in log_ratios]
    surrogate = None if any(v is None for v in raw) else float(np.dot(weights, raw))
    logger.debug(f"Mixture gradient {divergence.label}: K={params.n_components}, shift={shift:.6g}, "
                 f"surrogate={surrogate}")
    return GradEstimate(
        d_logits=d_logits,
        components=tuple(components),
        sample_count=sum(z.shape[0] for z in noises),
        seed=noise_seed(z_batches[0]),
        shift=shift,
        surrogate=surrogate,
    )
