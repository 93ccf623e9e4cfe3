# src/families/noise.py
"""
Seeded standard-normal noise batches for reparameterized sampling.
"""

from dataclasses import dataclass
from typing import Any, Union

import numpy as np


@dataclass(frozen=True, eq=False)
class NoiseBatch:
    """Standard-normal draws z of shape (N, n) tagged with the stream that produced them."""

    z: np.ndarray
    seed: int
    stream_id: int

    @classmethod
    def draw(cls, seed: int, stream_id: int, n_samples: int, dim: int) -> "NoiseBatch":
        """
        Draw a reproducible batch.

        Identical (seed, stream_id, n_samples, dim) always yields identical z, so a run can
        re-create any step's noise from its index alone.

        Args:
            seed: Root seed of the run (non-negative).
            stream_id: Independent stream index, usually the step index.
            n_samples: Number of rows N.
            dim: Number of columns n.
        """
        if seed < 0 or stream_id < 0:
            raise ValueError(f"seed and stream_id must be non-negative, got {seed}, {stream_id}")
        if n_samples < 1 or dim < 1:
            raise ValueError(f"Noise batch needs N >= 1 and n >= 1, got {n_samples}x{dim}")
        rng = np.random.default_rng([seed, stream_id])
        z = rng.standard_normal((n_samples, dim))
        z.setflags(write=False)
        return cls(z=z, seed=seed, stream_id=stream_id)

    @property
    def n_samples(self) -> int:
        return self.z.shape[0]

    @property
    def dim(self) -> int:
        return self.z.shape[1]


def noise_array(z: Union[NoiseBatch, Any]) -> np.ndarray:
    """Return the raw (N, n) array from a NoiseBatch or array-like."""
    if isinstance(z, NoiseBatch):
        return z.z
    return np.atleast_2d(np.asarray(z, dtype=float))


def noise_seed(z: Union[NoiseBatch, Any]) -> int:
    """Seed recorded in gradient metadata; -1 for raw arrays."""
    return z.seed if isinstance(z, NoiseBatch) else -1
