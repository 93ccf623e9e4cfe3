# src/targets/uci.py
"""
Tabular dataset loading for the Bayesian logistic-regression posterior.
Reads a comma-separated file, maps binary labels to -1/+1, splits and standardizes.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
import pandas as pd
from sklearn.model_selection import train_test_split
from sklearn.preprocessing import StandardScaler

from src.targets.logistic import LogisticPosterior
from src.utils.errors import ConfigError, DataError

logger = logging.getLogger(__name__)


@dataclass
class UCISplit:
    """Train/test arrays ready for LogisticPosterior; labels in {-1, +1}."""

    train_features: np.ndarray
    train_labels: np.ndarray
    test_features: np.ndarray
    test_labels: np.ndarray
    feature_names: List[str]
    label_tokens: Tuple[str, str]
    dropped_columns: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    def posterior(self, prior_variance: float = 1.0) -> LogisticPosterior:
        return LogisticPosterior(self.train_features, self.train_labels, prior_variance)


def _is_number(token: str) -> bool:
    try:
        return np.isfinite(float(token))
    except (TypeError, ValueError):
        return False


def load_uci_csv(
    path: Union[str, Path],
    label_column: int = -1,
    standardize: bool = True,
    split_seed: int = 0,
    test_fraction: float = 0.2,
) -> UCISplit:
    """
    Load a binary-classification CSV and return a deterministic train/test split.

    A header row is detected when the first row has a non-numeric feature cell. Label
    tokens are sorted and mapped to (-1, +1). With `standardize`, features are scaled
    with train-set statistics; zero-variance columns are dropped with a warning.

    Args:
        path: CSV file path.
        label_column: Column index of the label; negative counts from the end.
        standardize: Scale features to train mean 0, variance 1.
        split_seed: Seed of the shuffled split.
        test_fraction: Fraction of rows held out, in (0, 1).

    Returns:
        UCISplit with train and test arrays.

    Raises:
        DataError: Unparseable cell (with row/column), not exactly two classes,
            or a training split with a single class.
        ConfigError: test_fraction outside (0, 1).
    """
    if not 0.0 < test_fraction < 1.0:
        logger.error(f"Invalid test_fraction {test_fraction}")
        raise ConfigError(f"test_fraction must lie in (0, 1), got {test_fraction}")

    file_path = Path(path)
    try:
        raw = pd.read_csv(file_path, header=None, dtype=str, skipinitialspace=True, keep_default_na=False)
    except FileNotFoundError:
        logger.error(f"Dataset file not found: {file_path}")
        raise
    except pd.errors.ParserError as e:
        logger.error(f"Malformed CSV {file_path}: {e}")
        raise DataError(f"Malformed CSV {file_path}: {e}")

    n_cols = raw.shape[1]
    if n_cols < 2:
        raise DataError(f"{file_path} needs at least one feature and one label column")
    label_idx = label_column % n_cols
    feature_idx = [j for j in range(n_cols) if j != label_idx]

    first_row = raw.iloc[0]
    has_header = not all(_is_number(first_row[j]) for j in feature_idx)
    if has_header:
        names = [str(first_row[j]).strip() for j in feature_idx]
        body = raw.iloc[1:].reset_index(drop=True)
        row_offset = 2
    else:
        names = [f"x{j}" for j in feature_idx]
        body = raw
        row_offset = 1
    if body.empty:
        raise DataError(f"{file_path} has no data rows")

    features = np.empty((len(body), len(feature_idx)))
    for out_j, j in enumerate(feature_idx):
        parsed = pd.to_numeric(body[j].str.strip(), errors="coerce").to_numpy(dtype=float)
        bad = np.flatnonzero(~np.isfinite(parsed))
        if bad.size:
            row = int(bad[0]) + row_offset
            logger.error(f"Unparseable cell at row {row}, column {j} in {file_path}: '{body[j].iloc[bad[0]]}'")
            raise DataError(f"Unparseable cell at row {row}, column {j}: '{body[j].iloc[bad[0]]}'")
        features[:, out_j] = parsed

    tokens = body[label_idx].str.strip()
    classes = sorted(tokens.unique())
    if len(classes) != 2:
        logger.error(f"Expected 2 label classes in {file_path}, found {len(classes)}: {classes[:5]}")
        raise DataError(f"Labels must take exactly two values, found {len(classes)}")
    labels = np.where(tokens.to_numpy() == classes[0], -1.0, 1.0)

    indices = np.arange(len(body))
    train_idx, test_idx = train_test_split(indices, test_size=test_fraction, random_state=split_seed, shuffle=True)
    train_idx, test_idx = np.sort(train_idx), np.sort(test_idx)
    x_train, x_test = features[train_idx], features[test_idx]
    y_train, y_test = labels[train_idx], labels[test_idx]
    if np.unique(y_train).size < 2:
        logger.error(f"Training split of {file_path} contains a single class")
        raise DataError("Training split contains a single class")

    dropped: List[str] = []
    warnings: List[str] = []
    if standardize:
        scaler = StandardScaler().fit(x_train)
        constant = scaler.var_ == 0.0
        if constant.any():
            dropped = [n for n, c in zip(names, constant) if c]
            message = f"Dropped constant feature columns {dropped} from {file_path.name}"
            logger.warning(message)
            warnings.append(message)
        x_train = scaler.transform(x_train)[:, ~constant]
        x_test = scaler.transform(x_test)[:, ~constant]
        names = [n for n, c in zip(names, constant) if not c]

    logger.info(f"Loaded {file_path.name}: {len(train_idx)} train / {len(test_idx)} test rows, "
                f"{len(names)} features, labels {classes[0]}->-1, {classes[1]}->+1")
    return UCISplit(
        train_features=x_train,
        train_labels=y_train,
        test_features=x_test,
        test_labels=y_test,
        feature_names=names,
        label_tokens=(classes[0], classes[1]),
        dropped_columns=dropped,
        warnings=warnings,
    )
