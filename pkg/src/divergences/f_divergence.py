# src/divergences/f_divergence.py
"""
f-divergences D_f(p||q) = E_q[f(p/q)] encoded as the quintuple (f, f', f'', h, h')
with h(r) = r f'(r) - f(r).

Estimators never form raw ratios: each divergence also carries log-space evaluations
taking logu = log r, in the style of Csiszar-function libraries, so large log-ratios
do not overflow.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from src.utils.errors import ConfigError, DomainError

logger = logging.getLogger(__name__)

ArrayFn = Callable[[np.ndarray], np.ndarray]
Number = Union[float, np.ndarray]

NAMES = ("reverse_kl", "forward_kl", "chi2", "hellinger", "alpha")


@dataclass(frozen=True)
class FDivergence:
    """
    Closed-form quintuple plus log-space evaluations.

    Attributes:
        name: One of reverse_kl, forward_kl, chi2, hellinger, alpha.
        alpha: The alpha of the generic Alpha branch, else None.
        alpha_exponent: Exponent of the normalizer scaling law grad(C p) = C^a grad(p).
        f, f_prime, f_double_prime, h, h_prime: Functions of r > 0.
        f_log: f evaluated from log r.
        h_log: h evaluated from log r.
        path_weight_log: h'(r) r from log r, the weight of the path-derivative estimator.
        reparam_weight_log: f'(r) r from log r, the weight of the reparameterization estimator.
    """

    name: str
    alpha: Optional[float]
    alpha_exponent: float
    f: ArrayFn
    f_prime: ArrayFn
    f_double_prime: ArrayFn
    h: ArrayFn
    h_prime: ArrayFn
    f_log: ArrayFn
    h_log: ArrayFn
    path_weight_log: ArrayFn
    reparam_weight_log: ArrayFn

    @property
    def label(self) -> str:
        return f"alpha:{self.alpha:g}" if self.name == "alpha" else self.name


def _reverse_kl() -> FDivergence:
    return FDivergence(
        name="reverse_kl",
        alpha=None,
        alpha_exponent=0.0,
        f=lambda r: -np.log(r),
        f_prime=lambda r: -1.0 / r,
        f_double_prime=lambda r: 1.0 / r ** 2,
        h=lambda r: np.log(r) - 1.0,
        h_prime=lambda r: 1.0 / r,
        f_log=lambda logu: -logu,
        h_log=lambda logu: logu - 1.0,
        path_weight_log=lambda logu: np.ones_like(logu),
        reparam_weight_log=lambda logu: -np.ones_like(logu),
    )


def _forward_kl() -> FDivergence:
    return FDivergence(
        name="forward_kl",
        alpha=None,
        alpha_exponent=1.0,
        f=lambda r: r * np.log(r),
        f_prime=lambda r: np.log(r) + 1.0,
        f_double_prime=lambda r: 1.0 / r,
        h=lambda r: r,
        h_prime=lambda r: np.ones_like(r),
        f_log=lambda logu: np.exp(logu) * logu,
        h_log=lambda logu: np.exp(logu),
        path_weight_log=lambda logu: np.exp(logu),
        reparam_weight_log=lambda logu: np.exp(logu) * (logu + 1.0),
    )


def _chi2() -> FDivergence:
    return FDivergence(
        name="chi2",
        alpha=None,
        alpha_exponent=2.0,
        f=lambda r: (r - 1.0) ** 2,
        f_prime=lambda r: 2.0 * (r - 1.0),
        f_double_prime=lambda r: 2.0 * np.ones_like(r),
        h=lambda r: r ** 2 - 1.0,
        h_prime=lambda r: 2.0 * r,
        f_log=lambda logu: np.expm1(logu) ** 2,
        h_log=lambda logu: np.expm1(2.0 * logu),
        path_weight_log=lambda logu: 2.0 * np.exp(2.0 * logu),
        reparam_weight_log=lambda logu: 2.0 * np.exp(logu) * np.expm1(logu),
    )


def _hellinger() -> FDivergence:
    return FDivergence(
        name="hellinger",
        alpha=None,
        alpha_exponent=0.5,
        f=lambda r: (np.sqrt(r) - 1.0) ** 2,
        f_prime=lambda r: 1.0 - 1.0 / np.sqrt(r),
        f_double_prime=lambda r: 0.5 * r ** -1.5,
        h=lambda r: np.sqrt(r) - 1.0,
        h_prime=lambda r: 0.5 / np.sqrt(r),
        f_log=lambda logu: np.expm1(0.5 * logu) ** 2,
        h_log=lambda logu: np.expm1(0.5 * logu),
        path_weight_log=lambda logu: 0.5 * np.exp(0.5 * logu),
        reparam_weight_log=lambda logu: np.exp(logu) * -np.expm1(-0.5 * logu),
    )


def _alpha(a: float) -> FDivergence:
    scale = a * (a - 1.0)
    return FDivergence(
        name="alpha",
        alpha=a,
        alpha_exponent=a,
        f=lambda r: (r ** a - a * r - (1.0 - a)) / scale,
        f_prime=lambda r: (r ** (a - 1.0) - 1.0) / (a - 1.0),
        f_double_prime=lambda r: r ** (a - 2.0),
        h=lambda r: (r ** a - 1.0) / a,
        h_prime=lambda r: r ** (a - 1.0),
        f_log=lambda logu: (np.exp(a * logu) - a * np.exp(logu) - (1.0 - a)) / scale,
        h_log=lambda logu: np.expm1(a * logu) / a,
        path_weight_log=lambda logu: np.exp(a * logu),
        reparam_weight_log=lambda logu: np.exp(logu) * np.expm1((a - 1.0) * logu) / (a - 1.0),
    )


def make_divergence(name: str, alpha: Optional[float] = None) -> FDivergence:
    """
    Build the quintuple for a named f-divergence.

    Args:
        name: reverse_kl, forward_kl, chi2, hellinger or alpha.
        alpha: Required for the alpha branch; must not be 0 or 1.

    Raises:
        DomainError: alpha in {0, 1} for the generic branch (use reverse_kl / forward_kl).
        ConfigError: Unknown name or missing alpha.
    """
    key = name.strip().lower()
    if key == "reverse_kl":
        return _reverse_kl()
    if key == "forward_kl":
        return _forward_kl()
    if key == "chi2":
        return _chi2()
    if key == "hellinger":
        return _hellinger()
    if key == "alpha":
        if alpha is None:
            raise ConfigError("The alpha divergence needs an alpha value")
        a = float(alpha)
        if a == 0.0:
            raise DomainError("alpha = 0 is the limit case; use the 'reverse_kl' divergence")
        if a == 1.0:
            raise DomainError("alpha = 1 is the limit case; use the 'forward_kl' divergence")
        if not np.isfinite(a):
            raise DomainError(f"alpha must be finite, got {alpha}")
        return _alpha(a)
    logger.error(f"Unknown divergence name: {name}")
    raise ConfigError(f"Unknown divergence '{name}'; expected one of {', '.join(NAMES)}")


def parse_divergence(spec: str) -> FDivergence:
    """
    Parse a config/CLI string such as "reverse_kl", "chi2" or "alpha:1.5".

    "alpha:0" and "alpha:1" resolve to reverse_kl and forward_kl.
    """
    if not spec or not spec.strip():
        raise ConfigError("Empty divergence name")
    name, _, value = spec.strip().partition(":")
    if name.lower() != "alpha":
        if value:
            raise ConfigError(f"Divergence '{name}' takes no parameter")
        return make_divergence(name)
    try:
        a = float(value)
    except ValueError:
        raise ConfigError(f"Invalid alpha in divergence spec '{spec}'")
    if a == 0.0:
        logger.info("alpha:0 resolved to reverse_kl")
        return make_divergence("reverse_kl")
    if a == 1.0:
        logger.info("alpha:1 resolved to forward_kl")
        return make_divergence("forward_kl")
    return make_divergence("alpha", a)


def first_variation(div: FDivergence, r: Number) -> Number:
    """
    First variation f(r) - r f'(r) = -h(r) of the f-divergence functional.

    Raises:
        DomainError: Any r <= 0.
    """
    values = np.asarray(r, dtype=float)
    if np.any(values <= 0):
        raise DomainError("The first variation is defined for r > 0 only")
    result = -div.h(values)
    return float(result) if np.ndim(result) == 0 else result
