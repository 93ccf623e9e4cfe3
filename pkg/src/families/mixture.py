# src/families/mixture.py
"""
Gaussian mixture variational family q(x) = sum_k m_k q_k(x) with m = softmax(logits).
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from scipy.special import logsumexp, softmax

from src.families.diagonal import DiagGaussianParams
from src.families.gaussian import GaussianParams
from src.families.noise import NoiseBatch
from src.utils.errors import NumericalError
from src.utils.utils import as_rows, squeeze_like

logger = logging.getLogger(__name__)

Component = Union[GaussianParams, DiagGaussianParams]


@dataclass(frozen=True, eq=False)
class MixtureParams:
    """Mixture logits and component parameters; K >= 1."""

    logits: np.ndarray
    components: Tuple[Component, ...]
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        logits = np.array(self.logits, dtype=float).reshape(-1)
        components = tuple(self.components)
        if len(components) < 1:
            raise ValueError("A mixture needs at least one component")
        if logits.size != len(components):
            raise ValueError(f"{logits.size} logits for {len(components)} components")
        dims = {c.dim for c in components}
        if len(dims) != 1:
            raise ValueError(f"Mixture components disagree on dimension: {sorted(dims)}")
        if not np.isfinite(logits).all():
            logger.error("Mixture logits contain non-finite entries")
            raise NumericalError("Mixture logits contain non-finite entries")
        logits.setflags(write=False)
        weights = softmax(logits)
        weights.setflags(write=False)
        object.__setattr__(self, "logits", logits)
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "weights", weights)

    @property
    def dim(self) -> int:
        return self.components[0].dim

    @property
    def n_components(self) -> int:
        return len(self.components)

    def component_log_densities(self, x: Any) -> np.ndarray:
        """Return log(m_k) + log q_k(x) with shape (N, K)."""
        rows = as_rows(x, self.dim)
        log_w = np.log(self.weights)
        return np.stack([log_w[k] + c.log_density(rows) for k, c in enumerate(self.components)], axis=1)

    def responsibilities(self, x: Any) -> np.ndarray:
        joint = self.component_log_densities(x)
        return np.exp(joint - logsumexp(joint, axis=1, keepdims=True))

    def log_density(self, x: Any) -> Union[float, np.ndarray]:
        values = logsumexp(self.component_log_densities(x), axis=1)
        return squeeze_like(values, x)

    def score(self, x: Any) -> np.ndarray:
        rows = as_rows(x, self.dim)
        resp = self.responsibilities(rows)
        values = np.zeros_like(rows)
        for k, c in enumerate(self.components):
            values += resp[:, k:k + 1] * c.score(rows)
        return squeeze_like(values, x)

    def component_sample(self, k: int, z: Union[NoiseBatch, Any]) -> np.ndarray:
        """Reparameterized draws from component k only; the weights play no part."""
        if not 0 <= k < self.n_components:
            raise IndexError(f"Component index {k} out of range for K={self.n_components}")
        return self.components[k].sample(z)

    def updated(self, grad: Any, lr: float) -> "MixtureParams":
        components = [c.updated(g, lr) for c, g in zip(self.components, grad.components)]
        return MixtureParams(logits=self.logits - lr * grad.d_logits, components=tuple(components))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": "mixture",
            "logits": self.logits.tolist(),
            "components": [c.to_dict() for c in self.components],
        }


def init_mixture(
    n_components: int,
    dim: int,
    seed: int,
    mean_std: float = 2.0,
    diagonal: bool = False,
    scale: float = 1.0,
    means: Optional[Any] = None,
) -> MixtureParams:
    """
    Initialize a mixture with means drawn from N(0, mean_std^2 I) (or given), isotropic
    scales and uniform weights.

    Args:
        n_components: K.
        dim: Dimension n.
        seed: Seed for the component means.
        mean_std: Standard deviation of the initial means (2.0 gives N(0, 4 I)).
        diagonal: Use diagonal components instead of full-scale ones.
        scale: Common standard deviation of every component.
        means: Explicit (K, n) component means; replaces the random draw.

    Raises:
        ValueError: Non-positive scale or means of the wrong shape.
    """
    if not scale > 0:
        raise ValueError(f"Component scale must be positive, got {scale}")
    if means is None:
        rng = np.random.default_rng([seed, 0x6D6978])
        means = rng.normal(0.0, mean_std, size=(n_components, dim))
    else:
        means = np.asarray(means, dtype=float)
        if means.shape != (n_components, dim):
            raise ValueError(f"Expected ({n_components}, {dim}) component means, got shape {means.shape}")
    if diagonal:
        log_std = np.full(dim, np.log(scale))
        components: List[Component] = [DiagGaussianParams(mean=m, log_std=log_std) for m in means]
    else:
        components = [GaussianParams(mean=m, scale=scale * np.eye(dim)) for m in means]
    logger.info(f"Initialized {n_components}-component mixture in {dim}D (seed={seed}, mean_std={mean_std})")
    return MixtureParams(logits=np.zeros(n_components), components=tuple(components))
