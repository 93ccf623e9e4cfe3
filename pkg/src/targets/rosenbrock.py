# src/targets/rosenbrock.py
"""
Banana-shaped Rosenbrock target: log p(x) = -a (x1 - mu)^2 - b (x2 - x1^2)^2.
"""

from typing import Any, Union

import numpy as np

from src.targets.base import TargetDensity
from src.utils.errors import DomainError
from src.utils.utils import as_rows, squeeze_like


class RosenbrockTarget(TargetDensity):
    """2D Rosenbrock density. Integrating x2 first gives C = pi / sqrt(a b)."""

    dim = 2
    has_hessian = True

    def __init__(self, a: float = 1.0, b: float = 1.0, mu: float = 1.0) -> None:
        if a <= 0 or b <= 0:
            raise DomainError(f"Rosenbrock needs a > 0 and b > 0, got a={a}, b={b}")
        self.a = float(a)
        self.b = float(b)
        self.mu = float(mu)
        self.log_normalizer = float(np.log(np.pi) - 0.5 * np.log(self.a * self.b))

    def log_density_unnorm(self, x: Any) -> Union[float, np.ndarray]:
        rows = as_rows(x, 2)
        x1, x2 = rows[:, 0], rows[:, 1]
        values = -self.a * (x1 - self.mu) ** 2 - self.b * (x2 - x1 ** 2) ** 2
        return squeeze_like(values, x)

    def score(self, x: Any) -> np.ndarray:
        rows = as_rows(x, 2)
        x1, x2 = rows[:, 0], rows[:, 1]
        gap = x2 - x1 ** 2
        values = np.stack([
            -2.0 * self.a * (x1 - self.mu) + 4.0 * self.b * x1 * gap,
            -2.0 * self.b * gap,
        ], axis=1)
        return squeeze_like(values, x)

    def hessian(self, x: Any) -> np.ndarray:
        rows = as_rows(x, 2)
        x1, x2 = rows[:, 0], rows[:, 1]
        values = np.empty((rows.shape[0], 2, 2))
        values[:, 0, 0] = -2.0 * self.a + 4.0 * self.b * x2 - 12.0 * self.b * x1 ** 2
        values[:, 0, 1] = 4.0 * self.b * x1
        values[:, 1, 0] = values[:, 0, 1]
        values[:, 1, 1] = -2.0 * self.b
        return squeeze_like(values, x)
