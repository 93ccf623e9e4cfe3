# src/gradients/grad_estimate.py
"""
Gradient structure mirroring the variational parameters, with Monte Carlo metadata.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from src.utils.errors import NumericalError

logger = logging.getLogger(__name__)

_ARRAY_FIELDS = ("d_mean", "d_scale", "d_log_std", "d_logits")


@dataclass(frozen=True, eq=False)
class GradEstimate:
    """
    Gradient of an objective with respect to theta.

    Full Gaussians fill d_mean and d_scale, diagonal Gaussians d_mean and d_log_std,
    mixtures d_logits and one GradEstimate per component.

    Attributes:
        sample_count: Total number of Monte Carlo samples used.
        seed: Seed of the noise that produced the estimate (-1 if unknown).
        shift: Log-ratio shift applied before exponentiation (0.0 when off).
        surrogate: Surrogate objective value on the same samples, if computed.
        per_sample: Optional per-sample contributions keyed like the fields.
    """

    d_mean: Optional[np.ndarray] = None
    d_scale: Optional[np.ndarray] = None
    d_log_std: Optional[np.ndarray] = None
    d_logits: Optional[np.ndarray] = None
    components: Optional[Tuple["GradEstimate", ...]] = None
    sample_count: int = 0
    seed: int = -1
    shift: float = 0.0
    surrogate: Optional[float] = None
    per_sample: Optional[Dict[str, np.ndarray]] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        for name in _ARRAY_FIELDS:
            value = getattr(self, name)
            if value is None:
                continue
            arr = np.asarray(value, dtype=float)
            if not np.isfinite(arr).all():
                logger.error(f"Gradient field {name} contains non-finite entries")
                raise NumericalError(f"Non-finite gradient in {name}")
            object.__setattr__(self, name, arr)

    @property
    def per_sample_available(self) -> bool:
        return self.per_sample is not None

    def flat(self) -> np.ndarray:
        """All gradient entries as one vector, components last."""
        parts = [getattr(self, name).ravel() for name in _ARRAY_FIELDS if getattr(self, name) is not None]
        for comp in self.components or ():
            parts.append(comp.flat())
        return np.concatenate(parts) if parts else np.zeros(0)

    def norm(self) -> float:
        return float(np.linalg.norm(self.flat()))

    def scaled(self, factor: float) -> "GradEstimate":
        """Return factor * gradient with the same metadata."""
        values = {name: None if getattr(self, name) is None else factor * getattr(self, name)
                  for name in _ARRAY_FIELDS}
        components = None if self.components is None else tuple(c.scaled(factor) for c in self.components)
        return GradEstimate(components=components, sample_count=self.sample_count, seed=self.seed,
                            shift=self.shift, surrogate=self.surrogate, **values)

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {name: getattr(self, name).tolist()
                                  for name in _ARRAY_FIELDS if getattr(self, name) is not None}
        if self.components is not None:
            result["components"] = [c.to_dict() for c in self.components]
        result.update(sample_count=self.sample_count, seed=self.seed, shift=self.shift,
                      surrogate=self.surrogate, per_sample_available=self.per_sample_available)
        return result
