# src/core/__init__.py
"""
Core module for the toolkit.
Contains the optimization loop, run records and experiment orchestration; the CLI lives in src.core.app.
"""

from .experiments import (
    run_blr,
    run_divergence_sweep,
    run_flow_comparison,
    run_flow_seed_sweep,
    run_geodesic,
    run_gmm_fit,
    run_self_checks,
)
from .optimization import optimize, run_vi
from .trajectory import BLREntry, BLRReport, Trajectory

__all__ = [
    "BLREntry",
    "BLRReport",
    "Trajectory",
    "optimize",
    "run_blr",
    "run_divergence_sweep",
    "run_flow_comparison",
    "run_flow_seed_sweep",
    "run_geodesic",
    "run_gmm_fit",
    "run_self_checks",
    "run_vi",
]
