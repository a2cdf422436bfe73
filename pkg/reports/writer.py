"""Deterministic report files.

Data files (``*.csv`` and ``summary.json``) depend only on the resolved
config: fixed column order, ``%.17g`` floats, sorted JSON keys, ``\\n``
line endings. Timing and versions go to the manifest instead.
"""

import hashlib
import json
import math
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

import numpy as np
import pandas as pd

from spectral.field import SpectralField
from spectral.snapshot import save_snapshot
from utils.errors import ReportIOError
from utils.logging import get_logger


logger = get_logger("reports.writer")

SUMMARY_FILE = "summary.json"
SNAPSHOT_DIR = "snapshots"
FLOAT_FORMAT = "%.17g"


def to_jsonable(value: Any) -> Any:
    """Plain JSON types; non-finite floats become the strings 'NaN', 'Infinity', '-Infinity'."""
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": to_jsonable(float(np.real(value))), "im": to_jsonable(float(np.imag(value)))}
    if isinstance(value, (np.floating, float)):
        f = float(value)
        if math.isnan(f):
            return "NaN"
        if math.isinf(f):
            return "Infinity" if f > 0 else "-Infinity"
        return f
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, "model_dump"):
        return to_jsonable(value.model_dump(mode="json"))
    if hasattr(value, "value") and isinstance(getattr(value, "value"), (str, int)):
        return value.value
    return value


def canonical_json(value: Any) -> str:
    return json.dumps(to_jsonable(value), sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False)


def stable_hash(value: Any) -> str:
    return hashlib.sha256(canonical_json(value).encode("utf-8")).hexdigest()


def file_hash(path: Union[str, Path]) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _clean_frame(frame: pd.DataFrame) -> pd.DataFrame:
    """Complex columns split into _re/_im; column order is preserved otherwise."""
    out = {}
    for column in frame.columns:
        series = frame[column]
        if np.iscomplexobj(series.to_numpy()):
            out[f"{column}_re"] = np.real(series.to_numpy())
            out[f"{column}_im"] = np.imag(series.to_numpy())
        else:
            out[str(column)] = series.to_numpy()
    return pd.DataFrame(out, columns=list(out.keys()))


def write_table(run_dir: Union[str, Path], name: str, frame: pd.DataFrame) -> Path:
    path = Path(run_dir) / f"{name}.csv"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        _clean_frame(frame).to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    except OSError as e:
        raise ReportIOError(f"failed to write table {name}: {e}", str(path))
    return path


def write_summary(run_dir: Union[str, Path], summary: Dict[str, Any]) -> Path:
    path = Path(run_dir) / SUMMARY_FILE
    text = json.dumps(to_jsonable(summary), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n", encoding="utf-8")
    except OSError as e:
        raise ReportIOError(f"failed to write summary: {e}", str(path))
    return path


def write_report(
    run_dir: Union[str, Path],
    tables: Optional[Dict[str, pd.DataFrame]] = None,
    summary: Optional[Dict[str, Any]] = None,
    fields: Optional[Dict[str, SpectralField]] = None,
) -> List[Path]:
    """Write every table, the summary and any snapshots; returns the data files.

    An empty result still yields a valid ``summary.json``.
    """
    run_dir = Path(run_dir)
    paths = [write_table(run_dir, name, frame) for name, frame in sorted((tables or {}).items())]
    paths.append(write_summary(run_dir, summary or {}))
    for name, field in sorted((fields or {}).items()):
        save_snapshot(field, run_dir / SNAPSHOT_DIR / f"{name}.npz")
    logger.info(
        f"Report written to {run_dir}",
        extra_data={"tables": len(tables or {}), "snapshots": len(fields or {})},
    )
    return paths


def read_summary(run_dir: Union[str, Path]) -> Dict[str, Any]:
    path = Path(run_dir) / SUMMARY_FILE
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise ReportIOError(f"failed to read summary: {e}", str(path))
