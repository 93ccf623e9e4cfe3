# src/config/__init__.py
"""
Configuration module for the toolkit.
Exposes the .env-backed settings; run configurations live in src.config.run_config.
"""

from .config import (
    BLR_EVAL_SAMPLES,
    BLR_EVAL_SEEDS,
    DEFAULT_ITERATIONS,
    DEFAULT_LEARNING_RATE,
    DEFAULT_MC_SAMPLES,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_SEED,
    FIT_REGULARIZATION,
    LOG_LEVEL,
    SINGULAR_PIVOT_RTOL,
    SYMMETRY_TOL,
    WORKERS,
    configure_logging,
)

__all__ = [
    "BLR_EVAL_SAMPLES",
    "BLR_EVAL_SEEDS",
    "DEFAULT_ITERATIONS",
    "DEFAULT_LEARNING_RATE",
    "DEFAULT_MC_SAMPLES",
    "DEFAULT_OUTPUT_DIR",
    "DEFAULT_SEED",
    "FIT_REGULARIZATION",
    "LOG_LEVEL",
    "SINGULAR_PIVOT_RTOL",
    "SYMMETRY_TOL",
    "WORKERS",
    "configure_logging",
]
