# src/gradients/__init__.py
"""
Gradient estimators: reparameterization, path-derivative, closed-form Gaussian and
Gaussian-mixture surrogate gradients, plus the log-ratio shift.
"""

from .closed_form import expected_target_hessian, gaussian_closed_form_path_gradient, hessian_form_scale_gradient
from .gmm import gmm_surrogate_gradient
from .grad_estimate import GradEstimate
from .path import contract_jacobian, path_gradient, path_weights
from .ratio import StopGradientRatio, ratio_shift
from .reparam import explicit_score_terms, reparam_gradient_f, reparam_gradient_kl, score_term_mean
from .scaling import normalizer_scaling_check

__all__ = [
    "GradEstimate",
    "StopGradientRatio",
    "contract_jacobian",
    "expected_target_hessian",
    "explicit_score_terms",
    "gaussian_closed_form_path_gradient",
    "gmm_surrogate_gradient",
    "hessian_form_scale_gradient",
    "normalizer_scaling_check",
    "path_gradient",
    "path_weights",
    "ratio_shift",
    "reparam_gradient_f",
    "reparam_gradient_kl",
    "score_term_mean",
]
