# src/families/serialization.py
"""
JSON round-trip for variational parameters.
Python's float repr is the shortest string that parses back to the same double, so
values survive a dump/load cycle exactly.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

from src.families.diagonal import DiagGaussianParams
from src.families.gaussian import GaussianParams
from src.families.mixture import MixtureParams
from src.utils.errors import ConfigError

logger = logging.getLogger(__name__)

Params = Union[GaussianParams, DiagGaussianParams, MixtureParams]


def params_from_dict(data: Dict[str, Any]) -> Params:
    """
    Rebuild parameters from the dictionary produced by `to_dict`.

    Raises:
        ConfigError: If the family tag is unknown or fields are missing.
    """
    family = data.get("family")
    try:
        if family == "gaussian":
            return GaussianParams(mean=data["mean"], scale=data["scale"])
        if family == "diag":
            return DiagGaussianParams(mean=data["mean"], log_std=data["log_std"])
        if family == "mixture":
            components = tuple(params_from_dict(c) for c in data["components"])
            return MixtureParams(logits=data["logits"], components=components)
    except KeyError as e:
        logger.error(f"Missing field {e} for family '{family}'")
        raise ConfigError(f"Missing field {e} for family '{family}'")
    logger.error(f"Unknown family tag: {family}")
    raise ConfigError(f"Unknown family tag: {family}")


def dump_params(params: Params, path: Union[str, Path]) -> None:
    file_path = Path(path)
    with open(file_path, "w", encoding="utf-8") as f:
        json.dump(params.to_dict(), f, indent=2)
    logger.debug(f"Saved parameters to {file_path}")


def load_params(path: Union[str, Path]) -> Params:
    file_path = Path(path)
    with open(file_path, "r", encoding="utf-8") as f:
        data = json.load(f)
    logger.debug(f"Loaded parameters from {file_path}")
    return params_from_dict(data)
