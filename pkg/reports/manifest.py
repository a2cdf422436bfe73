"""Run manifest: everything needed to reproduce a run, plus what is allowed to vary.

The data files are byte-identical for a given resolved config; wall time,
timestamps, thread counts and package versions live only here.
"""

import platform
from datetime import datetime, timezone
UTC = timezone.utc
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field

from config.scenarios import ScenarioConfig
from reports.writer import FLOAT_FORMAT, canonical_json, file_hash, stable_hash, to_jsonable
from spectral.convolution import DENSE_LIMITS
from spectral.littlewood_paley import PLATEAU, SUPPORT, THETA_HIGH, THETA_LOW, dyadic_range
from utils.errors import ReportIOError


MANIFEST_FILE = "manifest.json"
PACKAGE_NAME = "capillary-waves-toolkit"
TRACKED_PACKAGES = ("numpy", "scipy", "pandas", "pydantic", "pydantic-settings", "pyyaml")


def package_versions() -> Dict[str, str]:
    versions = {"python": platform.python_version()}
    for name in (PACKAGE_NAME,) + TRACKED_PACKAGES:
        try:
            versions[name] = version(name)
        except PackageNotFoundError:
            versions[name] = "unknown"
    return versions


def config_hash(config: ScenarioConfig) -> str:
    return stable_hash(config.resolved())


class RunManifest(BaseModel):
    scenario: str
    kind: str
    config_hash: str
    config: Dict[str, Any]
    truncation: Dict[str, Any]
    constants: Dict[str, Any]
    data_files: Dict[str, str] = Field(default_factory=dict, description="file name -> sha256")
    versions: Dict[str, str] = Field(default_factory=package_versions)
    workers: int = 1
    wall_time_seconds: float = 0.0
    finished_at: str = Field(default_factory=lambda: datetime.now(UTC).isoformat())
    status: str = "ok"
    error: Optional[Dict[str, Any]] = None


def build_manifest(
    config: ScenarioConfig,
    data_files: List[Path],
    wall_time: float,
    workers: int = 1,
    error: Optional[Dict[str, Any]] = None,
) -> RunManifest:
    n = config.grid.n
    k_min, k_max = dyadic_range(config.grid.build())
    return RunManifest(
        scenario=config.name,
        kind=config.kind.value,
        config_hash=config_hash(config),
        config=config.resolved(),
        truncation={
            "n_points_per_axis": n,
            "box_length": config.grid.box_length,
            "max_mode_index": n // 2 - 1,
            "nyquist_zeroed": True,
            "dense_limits": {str(k): v for k, v in DENSE_LIMITS.items()},
            "dyadic_bands": [k_min, k_max],
            "csv_float_format": FLOAT_FORMAT,
        },
        constants={
            "alpha": config.constants.alpha,
            "delta": config.constants.delta,
            "delta_tilde": config.constants.delta_tilde,
            "n0": config.constants.n0,
            "high_weight": config.constants.high_weight,
            "cutoffs": {
                "bump_plateau": PLATEAU,
                "bump_support": SUPPORT,
                "theta_log2_window": [THETA_LOW, THETA_HIGH],
            },
        },
        data_files={p.name: file_hash(p) for p in data_files},
        workers=workers,
        wall_time_seconds=wall_time,
        status="ok" if error is None else "error",
        error=error,
    )


def write_manifest(run_dir: Union[str, Path], manifest: RunManifest) -> Path:
    path = Path(run_dir) / MANIFEST_FILE
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(canonical_json(to_jsonable(manifest.model_dump())) + "\n", encoding="utf-8")
    except OSError as e:
        raise ReportIOError(f"failed to write manifest: {e}", str(path))
    return path
