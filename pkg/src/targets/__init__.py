# src/targets/__init__.py
"""
Target distributions p(x) with analytic scores: Gaussian, Rosenbrock, Gaussian mixture
and the Bayesian logistic-regression posterior, plus dataset loading and score checks.
"""

from .base import ScaledTarget, TargetDensity
from .checks import hessian_finite_diff_check, score_finite_diff_check
from .gaussian import GaussianTarget
from .logistic import LogisticPosterior, log_sigmoid
from .mixture import MixtureTarget, mixture_target_logsumexp, three_mode_1d_mixture
from .rosenbrock import RosenbrockTarget
from .uci import UCISplit, load_uci_csv

__all__ = [
    "GaussianTarget",
    "LogisticPosterior",
    "MixtureTarget",
    "RosenbrockTarget",
    "ScaledTarget",
    "TargetDensity",
    "UCISplit",
    "hessian_finite_diff_check",
    "load_uci_csv",
    "log_sigmoid",
    "mixture_target_logsumexp",
    "score_finite_diff_check",
    "three_mode_1d_mixture",
]
