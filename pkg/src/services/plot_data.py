# src/services/plot_data.py
"""
Plot-data output service.
Writes trajectories, BLR reports and density grids as CSV or JSON files for external plotting.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import pandas as pd

from src.core.trajectory import BLRReport, Trajectory
from src.utils.errors import ConfigError, DataError

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")
FLOAT_FORMAT = "%.17g"

PlotData = Union[Trajectory, BLRReport, pd.DataFrame]


def _as_frame(data: PlotData) -> pd.DataFrame:
    if isinstance(data, (Trajectory, BLRReport)):
        return data.to_frame()
    if isinstance(data, pd.DataFrame):
        return data
    raise ConfigError(f"Cannot emit plot data from {type(data).__name__}")


def schema_header(data: PlotData, extra: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """The schema record written as the leading '#' line of CSV files."""
    frame = _as_frame(data)
    header: Dict[str, Any] = {"columns": [str(c) for c in frame.columns]}
    if isinstance(data, Trajectory):
        header.update(name=data.name, provenance=data.provenance, **data.header)
    elif isinstance(data, BLRReport):
        header.update(provenance=data.provenance, **data.header)
    header.update(extra or {})
    return header


def _resolve_format(path: Path, fmt: Optional[str]) -> str:
    fmt = (fmt or path.suffix.lstrip(".") or "csv").lower()
    if fmt not in FORMATS:
        raise ConfigError(f"Unsupported plot-data format '{fmt}'; expected one of {', '.join(FORMATS)}")
    return fmt


def emit_plot_data(
    data: PlotData,
    path: Union[str, Path],
    fmt: Optional[str] = None,
    extra_header: Optional[Dict[str, Any]] = None,
) -> Path:
    """
    Write data to path as CSV or JSON.

    CSV files start with one '#' comment line holding the JSON schema (columns,
    provenance, config echo), then RFC-4180 rows with LF newlines, '.' decimals,
    17 significant digits and empty cells for missing values. JSON files hold the
    same header plus the rows as objects, UTF-8 encoded.

    Args:
        data: Trajectory, BLRReport or a DataFrame (density grids, combined sweeps).
        path: Output file; parent directories are created.
        fmt: "csv" or "json"; defaults to the file suffix.
        extra_header: Additional header entries.

    Returns:
        The written path.

    Raises:
        OSError: The file cannot be written; the message names the path.
    """
    file_path = Path(path)
    fmt = _resolve_format(file_path, fmt)
    frame = _as_frame(data)
    header = schema_header(data, extra_header)
    try:
        file_path.parent.mkdir(parents=True, exist_ok=True)
        with open(file_path, "w", encoding="utf-8", newline="") as f:
            if fmt == "csv":
                f.write("# " + json.dumps(header, sort_keys=True, separators=(",", ":")) + "\n")
                frame.to_csv(f, index=False, float_format=FLOAT_FORMAT, na_rep="", lineterminator="\n")
            else:
                records = [
                    {k: (None if pd.isna(v) else v) for k, v in row.items()}
                    for row in (data.rows if isinstance(data, Trajectory) else frame.to_dict(orient="records"))
                ]
                json.dump({"header": header, "rows": records}, f, indent=2, sort_keys=True, allow_nan=False)
                f.write("\n")
    except OSError as e:
        logger.error(f"Failed to write plot data to {file_path}: {e}")
        raise OSError(f"Cannot write {file_path}: {e}") from e
    logger.info(f"Wrote {len(frame)} rows to {file_path} ({fmt})")
    return file_path


def load_plot_csv(path: Union[str, Path]) -> pd.DataFrame:
    """Read a CSV written by emit_plot_data, skipping the schema line."""
    file_path = Path(path)
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            first = f.readline()
    except OSError as e:
        logger.error(f"Failed to read plot data {file_path}: {e}")
        raise OSError(f"Cannot read {file_path}: {e}") from e
    return pd.read_csv(file_path, skiprows=1 if first.startswith("#") else 0)


def load_trajectory_json(path: Union[str, Path]) -> Trajectory:
    """
    Rebuild a Trajectory from a JSON file written by emit_plot_data.

    Raises:
        DataError: The file is not a trajectory dump.
    """
    file_path = Path(path)
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        logger.error(f"Failed to read trajectory {file_path}: {e}")
        raise OSError(f"Cannot read {file_path}: {e}") from e
    except json.JSONDecodeError as e:
        raise DataError(f"Invalid JSON in {file_path}: {e}")
    if not isinstance(data, dict) or "header" not in data or "rows" not in data:
        raise DataError(f"{file_path} is not a trajectory dump")
    header = dict(data["header"])
    columns = header.pop("columns", [])
    name = header.pop("name", file_path.stem)
    provenance = header.pop("provenance", "")
    trajectory = Trajectory(name=name, header=header, provenance=provenance)
    for row in data["rows"]:
        stats = {k: v for k, v in row.items() if k not in ("step", "t")}
        trajectory.append(int(row["step"]), row["t"], **stats)
    if trajectory.rows and trajectory.columns != columns:
        # append orders stat columns first; restore the dumped order
        trajectory.columns = list(columns)
        trajectory.rows = [{c: r[c] for c in columns} for r in trajectory.rows]
    return trajectory
