# src/core/trajectory.py
"""
Run records: per-iteration trajectories and Bayesian logistic-regression reports.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from src.families.mixture import MixtureParams
from src.utils.errors import NumericalError

logger = logging.getLogger(__name__)

Row = Dict[str, Optional[float]]

STAT_COLUMNS = ["w2_to_target", "div_estimate", "grad_norm", "shift", "surrogate"]


def param_summary(params: Any) -> Dict[str, float]:
    """
    Flatten parameters into named columns.

    Gaussians give mean_i and cov_ij; mixtures give w_k, mean_k_i and cov_k_ij.
    """
    if isinstance(params, MixtureParams):
        summary: Dict[str, float] = {}
        for k, (w, comp) in enumerate(zip(params.weights, params.components)):
            summary[f"w_{k}"] = float(w)
            summary.update({f"mean_{k}_{i}": float(v) for i, v in enumerate(comp.mean)})
            cov = comp.covariance
            summary.update({f"cov_{k}_{i}{j}": float(cov[i, j]) for i in range(comp.dim) for j in range(comp.dim)})
        return summary
    mean = np.asarray(params.mean)
    cov = params.cov if hasattr(params, "cov") else params.covariance
    cov = getattr(cov, "matrix", cov)
    summary = {f"mean_{i}": float(v) for i, v in enumerate(mean)}
    summary.update({f"cov_{i}{j}": float(cov[i, j]) for i in range(mean.size) for j in range(mean.size)})
    return summary


@dataclass
class Trajectory:
    """
    Rows keyed by step with flow time t = step * tau.

    Attributes:
        name: Label of the run (estimator or method).
        header: Config echo written as the file header.
        provenance: Deterministic provenance string.
        columns: Column order; fixed by the first row.
        rows: Records with strictly increasing step; numbers are finite or None.
    """

    name: str
    header: Dict[str, Any] = field(default_factory=dict)
    provenance: str = ""
    columns: List[str] = field(default_factory=list)
    rows: List[Row] = field(default_factory=list)

    def append(self, step: int, t: float, params: Any = None, **stats: Optional[float]) -> Row:
        """Record one row; missing stats are left empty."""
        if self.rows and step <= self.rows[-1]["step"]:
            raise ValueError(f"Trajectory steps must increase: {step} after {self.rows[-1]['step']}")
        row: Row = {"step": step, "t": float(t)}
        if params is not None:
            row.update(param_summary(params))
        for name in STAT_COLUMNS:
            value = stats.pop(name, None)
            row[name] = None if value is None else float(value)
        row.update({k: None if v is None else float(v) for k, v in stats.items()})
        for key, value in row.items():
            if value is not None and not math.isfinite(value):
                logger.error(f"Non-finite {key} at step {step}")
                raise NumericalError(f"Non-finite {key} recorded at step {step}", step=step)
        if not self.columns:
            self.columns = list(row)
        elif list(row) != self.columns:
            raise ValueError(f"Row columns {list(row)} differ from trajectory columns {self.columns}")
        self.rows.append(row)
        return row

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        return np.array([np.nan if r[name] is None else r[name] for r in self.rows], dtype=float)

    def last(self) -> Row:
        return self.rows[-1]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=self.columns or ["step", "t"])


@dataclass
class BLREntry:
    """Accuracy summary of one training method on one dataset."""

    dataset: str
    method: str
    test_accuracy_mean: float
    test_accuracy_std: float
    posterior_sample_count: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.test_accuracy_mean <= 1.0:
            raise ValueError(f"Accuracy must lie in [0, 1], got {self.test_accuracy_mean}")
        if self.test_accuracy_std < 0:
            raise ValueError(f"Accuracy std must be non-negative, got {self.test_accuracy_std}")


@dataclass
class BLRReport:
    """Test accuracies per dataset and method."""

    entries: List[BLREntry] = field(default_factory=list)
    header: Dict[str, Any] = field(default_factory=dict)
    provenance: str = ""

    def add(self, entry: BLREntry) -> None:
        self.entries.append(entry)

    def to_frame(self) -> pd.DataFrame:
        columns = ["dataset", "method", "test_accuracy_mean", "test_accuracy_std", "posterior_sample_count"]
        return pd.DataFrame([vars(e) for e in self.entries], columns=columns)
