# tests/helpers.py
"""Random matrices and states shared by the test modules."""

import numpy as np


def random_spd(rng: np.random.Generator, n: int, floor: float = 0.2) -> np.ndarray:
    """Well-conditioned SPD matrix: A A^T / n + floor * I."""
    a = rng.normal(size=(n, n))
    m = a @ a.T / n + floor * np.eye(n)
    return 0.5 * (m + m.T)


def random_scale(rng: np.random.Generator, n: int) -> np.ndarray:
    """Nonsingular non-triangular scale matrix close to the identity."""
    return np.eye(n) + 0.2 * rng.normal(size=(n, n))


def random_symmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.normal(size=(n, n))
    return 0.5 * (a + a.T)


def relative_error(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(b)))))
