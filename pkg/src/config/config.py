# src/config/config.py
"""
General configuration settings for the toolkit.
Defines numerical tolerances and run defaults, overridable via .env.
"""

import logging
import os

from dotenv import load_dotenv

load_dotenv()
logger = logging.getLogger(__name__)

# Run defaults, overridable via .env
DEFAULT_LEARNING_RATE: float = float(os.getenv("DEFAULT_LEARNING_RATE", 0.01))  # Step size tau
DEFAULT_MC_SAMPLES: int = int(os.getenv("DEFAULT_MC_SAMPLES", 5))               # Monte Carlo samples N per step
DEFAULT_ITERATIONS: int = int(os.getenv("DEFAULT_ITERATIONS", 3000))            # Gradient steps per run
DEFAULT_SEED: int = int(os.getenv("DEFAULT_SEED", 0))                           # Root seed for noise streams
DEFAULT_OUTPUT_DIR: str = os.getenv("DEFAULT_OUTPUT_DIR", "runs")               # Where CLI outputs go
LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO").upper()                         # Root logger level
WORKERS: int = int(os.getenv("WORKERS", 1))                                     # Threads for seed sweeps

# Numerical tolerances
SINGULAR_PIVOT_RTOL: float = float(os.getenv("SINGULAR_PIVOT_RTOL", 1e-12))  # |pivot| floor relative to ||S||
SYMMETRY_TOL: float = float(os.getenv("SYMMETRY_TOL", 1e-10))                # Max asymmetry of SPD inputs
FIT_REGULARIZATION: float = float(os.getenv("FIT_REGULARIZATION", 1e-10))    # Ridge added to fitted covariances

# Bayesian logistic regression evaluation
BLR_EVAL_SAMPLES: int = int(os.getenv("BLR_EVAL_SAMPLES", 32))  # Posterior samples per prediction
BLR_EVAL_SEEDS: int = int(os.getenv("BLR_EVAL_SEEDS", 5))       # Evaluation seeds for mean/std

# Validate and log constants
try:
    assert DEFAULT_LEARNING_RATE > 0, "DEFAULT_LEARNING_RATE must be positive"
    assert DEFAULT_MC_SAMPLES >= 1, "DEFAULT_MC_SAMPLES must be >= 1"
    assert DEFAULT_ITERATIONS >= 1, "DEFAULT_ITERATIONS must be >= 1"
    assert WORKERS >= 1, "WORKERS must be >= 1"
    assert SINGULAR_PIVOT_RTOL > 0, "SINGULAR_PIVOT_RTOL must be positive"
    assert SYMMETRY_TOL > 0, "SYMMETRY_TOL must be positive"
    assert FIT_REGULARIZATION >= 0, "FIT_REGULARIZATION must be non-negative"
    assert BLR_EVAL_SAMPLES >= 1, "BLR_EVAL_SAMPLES must be >= 1"
    assert BLR_EVAL_SEEDS >= 1, "BLR_EVAL_SEEDS must be >= 1"
    assert LOG_LEVEL in ("DEBUG", "INFO", "WARNING", "ERROR"), "LOG_LEVEL must be a standard level name"
    logger.debug(f"Config loaded: DEFAULT_LEARNING_RATE={DEFAULT_LEARNING_RATE}, "
                 f"DEFAULT_MC_SAMPLES={DEFAULT_MC_SAMPLES}, DEFAULT_ITERATIONS={DEFAULT_ITERATIONS}, "
                 f"DEFAULT_SEED={DEFAULT_SEED}, WORKERS={WORKERS}, "
                 f"SINGULAR_PIVOT_RTOL={SINGULAR_PIVOT_RTOL}, SYMMETRY_TOL={SYMMETRY_TOL}, "
                 f"FIT_REGULARIZATION={FIT_REGULARIZATION}")
except AssertionError as e:
    logger.error(f"Invalid configuration: {e}")
    raise


def configure_logging(verbose: bool = False) -> None:
    """
    Configure the root logger once for command-line runs.

    Args:
        verbose: Force DEBUG level when True; otherwise LOG_LEVEL from .env applies.
    """
    level = logging.DEBUG if verbose else getattr(logging, LOG_LEVEL)
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    logger.info(f"Logging configured: level={logging.getLevelName(level)}")
