# src/utils/utils.py
"""
Utility functions shared across the toolkit.
Provides array coercion, finiteness checks, JSON object loading and run provenance.
"""

import hashlib
import json
import logging
import platform
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from src.utils.errors import ConfigError, NumericalError

logger = logging.getLogger(__name__)


def as_rows(x: Any, dim: int) -> np.ndarray:
    """
    Coerce a point or a batch of points into a 2D array of row vectors.

    Args:
        x: Array-like of shape (dim,) or (N, dim).
        dim: Expected number of columns.

    Returns:
        Float array of shape (N, dim).

    Raises:
        ValueError: If the trailing dimension does not match.
    """
    arr = np.atleast_2d(np.asarray(x, dtype=float))
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise ValueError(f"Expected rows of length {dim}, got shape {np.shape(x)}")
    return arr


def squeeze_like(values: np.ndarray, x: Any) -> Union[float, np.ndarray]:
    """Return a scalar (or a single row) when the caller passed a single point."""
    if np.ndim(x) == 1:
        out = values[0]
        return float(out) if np.ndim(out) == 0 else out
    return values


def require_finite(name: str, arr: Any) -> np.ndarray:
    """
    Raise NumericalError if any entry of arr is NaN or infinite.

    The error message names the first offending flat index.
    """
    values = np.asarray(arr, dtype=float)
    finite = np.isfinite(values)
    if not finite.all():
        bad = int(np.flatnonzero(~finite.ravel())[0])
        logger.error(f"Non-finite value in {name} at flat index {bad}")
        raise NumericalError(f"Non-finite value in {name} at flat index {bad}")
    return values


def load_json_object(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Load a JSON file that must contain a single object.

    Args:
        path: File path.

    Returns:
        Parsed dictionary.

    Raises:
        ConfigError: If the file is missing, invalid JSON, or not an object.
    """
    file_path = Path(path)
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            result = json.load(f)
    except FileNotFoundError:
        logger.error(f"Config file not found: {file_path}")
        raise ConfigError(f"Config file not found: {file_path}")
    except json.JSONDecodeError as e:
        logger.error(f"Invalid JSON in {file_path}: {e}")
        raise ConfigError(f"Invalid JSON in {file_path}: {e}")

    if not isinstance(result, dict):
        logger.error(f"Config in {file_path} is not a JSON object")
        raise ConfigError(f"Config in {file_path} must be a JSON object")
    logger.debug(f"Loaded JSON object with {len(result)} keys from {file_path}")
    return result


def provenance(config: Dict[str, Any]) -> str:
    """
    Build a deterministic provenance string for output headers.

    The digest covers the canonical JSON of the config, so identical configs give
    identical headers on every invocation.
    """
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha1(canonical.encode("utf-8")).hexdigest()[:12]
    return f"config-sha1:{digest} numpy:{np.__version__} python:{platform.python_version()}"
