"""Compare a run directory against a golden one within tolerances."""

import json
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from reports.writer import SUMMARY_FILE
from utils.errors import ReportIOError
from utils.logging import get_logger


logger = get_logger("reports.golden")

DEFAULT_RTOL = 1e-9
DEFAULT_ATOL = 1e-12


class Tolerances(BaseModel):
    """Relative tolerance per field; keys are ``file_stem.column``, ``column``, a summary path or its last key."""

    rtol: float = DEFAULT_RTOL
    atol: float = DEFAULT_ATOL
    fields: Dict[str, float] = Field(default_factory=dict)

    def for_field(self, *keys: str) -> float:
        for key in keys:
            if key in self.fields:
                return self.fields[key]
        return self.rtol


class GoldenMismatch(BaseModel):
    file: str
    location: str
    expected: Any = None
    actual: Any = None


class GoldenReport(BaseModel):
    golden_dir: str
    compared: List[str] = Field(default_factory=list)
    mismatches: List[GoldenMismatch] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches


def _number(value: Any) -> Union[float, None]:
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, float)):
        return float(value)
    if value in ("NaN", "Infinity", "-Infinity"):
        return float(value.replace("Infinity", "inf"))
    return None


def _close(expected: float, actual: float, rtol: float, atol: float) -> bool:
    if math.isnan(expected) or math.isnan(actual):
        return math.isnan(expected) and math.isnan(actual)
    if math.isinf(expected) or math.isinf(actual):
        return expected == actual
    return abs(expected - actual) <= atol + rtol * abs(expected)


def _compare_json(name: str, path: str, expected: Any, actual: Any, tol: Tolerances, out: List) -> None:
    e_num, a_num = _number(expected), _number(actual)
    if e_num is not None and a_num is not None:
        leaf = path.rsplit(".", 1)[-1].split("[", 1)[0]
        if not _close(e_num, a_num, tol.for_field(path, leaf), tol.atol):
            out.append(GoldenMismatch(file=name, location=path or "<root>", expected=expected, actual=actual))
        return
    if isinstance(expected, dict) and isinstance(actual, dict):
        for key in sorted(set(expected) | set(actual)):
            where = f"{path}.{key}" if path else key
            if key not in expected or key not in actual:
                out.append(GoldenMismatch(
                    file=name, location=where, expected=expected.get(key), actual=actual.get(key)
                ))
                continue
            _compare_json(name, where, expected[key], actual[key], tol, out)
        return
    if isinstance(expected, list) and isinstance(actual, list) and len(expected) == len(actual):
        for i, (e, a) in enumerate(zip(expected, actual)):
            _compare_json(name, f"{path}[{i}]", e, a, tol, out)
        return
    if expected != actual:
        out.append(GoldenMismatch(file=name, location=path or "<root>", expected=expected, actual=actual))


def _compare_csv(name: str, expected: pd.DataFrame, actual: pd.DataFrame, tol: Tolerances, out: List) -> None:
    if list(expected.columns) != list(actual.columns) or expected.shape != actual.shape:
        out.append(GoldenMismatch(
            file=name,
            location="shape",
            expected={"columns": list(expected.columns), "rows": len(expected)},
            actual={"columns": list(actual.columns), "rows": len(actual)},
        ))
        return
    for column in expected.columns:
        e, a = expected[column], actual[column]
        if pd.api.types.is_numeric_dtype(e) and pd.api.types.is_numeric_dtype(a):
            ev, av = e.to_numpy(dtype=float), a.to_numpy(dtype=float)
            rtol = tol.for_field(f"{Path(name).stem}.{column}", str(column))
            ok = np.isclose(av, ev, rtol=rtol, atol=tol.atol, equal_nan=True)
            for row in np.flatnonzero(~ok):
                out.append(GoldenMismatch(
                    file=name, location=f"{column}[{row}]", expected=float(ev[row]), actual=float(av[row])
                ))
        elif not e.astype(str).equals(a.astype(str)):
            out.append(GoldenMismatch(file=name, location=column))


def _read(path: Path) -> Tuple[str, Any]:
    try:
        if path.suffix == ".csv":
            try:
                return "csv", pd.read_csv(path)
            except pd.errors.EmptyDataError:
                return "csv", pd.DataFrame()
        return "json", json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise ReportIOError(f"failed to read {path.name}: {e}", str(path))


def compare_to_golden(
    run_dir: Union[str, Path],
    golden_dir: Union[str, Path],
    tolerances: Optional[Tolerances] = None,
) -> GoldenReport:
    """Every CSV and the summary of ``golden_dir`` must exist in ``run_dir`` and agree."""
    tol = tolerances or Tolerances()
    run_dir, golden_dir = Path(run_dir), Path(golden_dir)
    if not golden_dir.is_dir():
        raise ReportIOError(f"golden directory not found: {golden_dir}", str(golden_dir))

    report = GoldenReport(golden_dir=str(golden_dir))
    expected_files = sorted(golden_dir.glob("*.csv")) + sorted(golden_dir.glob(SUMMARY_FILE))
    for golden_path in expected_files:
        name = golden_path.name
        actual_path = run_dir / name
        report.compared.append(name)
        if not actual_path.exists():
            report.mismatches.append(GoldenMismatch(file=name, location="<missing>"))
            continue
        kind, expected = _read(golden_path)
        _, actual = _read(actual_path)
        if kind == "csv":
            _compare_csv(name, expected, actual, tol, report.mismatches)
        else:
            _compare_json(name, "", expected, actual, tol, report.mismatches)

    if report.passed:
        logger.info(f"Golden comparison passed ({len(report.compared)} files)")
    else:
        logger.warning(
            f"Golden comparison failed with {len(report.mismatches)} mismatches",
            extra_data={"first": report.mismatches[0].model_dump()},
        )
    return report
