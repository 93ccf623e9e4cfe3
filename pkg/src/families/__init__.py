# src/families/__init__.py
"""
Reparameterized variational families: full-scale Gaussian, diagonal Gaussian and
Gaussian mixtures, with seeded noise batches and JSON serialization.
"""

from typing import Any, Union

import numpy as np

from .diagonal import DiagGaussianParams
from .gaussian import GaussianParams
from .mixture import MixtureParams, init_mixture
from .noise import NoiseBatch, noise_array
from .serialization import dump_params, load_params, params_from_dict

SingleParams = Union[GaussianParams, DiagGaussianParams]


def reparameterize(params: SingleParams, z: Any) -> np.ndarray:
    """Return x = mean + z S^T row by row."""
    return params.sample(z)


def log_density(params: Any, x: Any) -> Union[float, np.ndarray]:
    return params.log_density(x)


def score_q(params: Any, x: Any) -> np.ndarray:
    return params.score(x)


def hessian_log_q(params: SingleParams) -> np.ndarray:
    """Hessian of log q in x; constant for Gaussians."""
    return params.hessian()


def mixture_log_density(params: MixtureParams, x: Any) -> Union[float, np.ndarray]:
    return params.log_density(x)


def mixture_score(params: MixtureParams, x: Any) -> np.ndarray:
    return params.score(x)


def mixture_component_sample(params: MixtureParams, k: int, z: Any) -> np.ndarray:
    return params.component_sample(k, z)


__all__ = [
    "DiagGaussianParams",
    "GaussianParams",
    "MixtureParams",
    "NoiseBatch",
    "SingleParams",
    "dump_params",
    "hessian_log_q",
    "init_mixture",
    "load_params",
    "log_density",
    "mixture_component_sample",
    "mixture_log_density",
    "mixture_score",
    "noise_array",
    "params_from_dict",
    "reparameterize",
    "score_q",
]
