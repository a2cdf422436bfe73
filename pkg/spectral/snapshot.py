"""Field snapshots: ``.npz`` archive with a JSON header.

Real fields keep only the half-spectrum (last axis 0..n/2), row-major;
complex fields keep the full lattice. Both use FFT ordering.
"""

import json
from pathlib import Path
from typing import Union

import numpy as np

from spectral.field import SpectralField
from spectral.grid import Grid2D
from utils.errors import ReportIOError


FORMAT_VERSION = 1


def _header(field: SpectralField) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "n": field.grid.n,
        "box_length": field.grid.box_length,
        "reality_flag": field.is_real,
        "ordering": "row-major-half-spectrum" if field.is_real else "row-major-full",
    }


def _expand_half_spectrum(half: np.ndarray, n: int) -> np.ndarray:
    full = np.zeros((n, n), dtype=complex)
    width = half.shape[1]
    full[:, :width] = half
    for j in range(width, n):
        rows = (-np.arange(n)) % n
        full[:, j] = np.conj(half[rows, (n - j) % n])
    return full


def save_snapshot(field: SpectralField, path: Union[str, Path]) -> Path:
    path = Path(path)
    header = _header(field)
    data = field.coefficients[:, : field.grid.n // 2 + 1] if field.is_real else field.coefficients
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "wb") as fh:
            np.savez(fh, header=np.array(json.dumps(header, sort_keys=True)), coefficients=data)
    except OSError as e:
        raise ReportIOError(f"failed to write snapshot: {e}", str(path))
    return path


def load_snapshot(path: Union[str, Path]) -> SpectralField:
    path = Path(path)
    try:
        with np.load(path, allow_pickle=False) as archive:
            header = json.loads(str(archive["header"]))
            data = np.array(archive["coefficients"])
    except (OSError, KeyError, ValueError) as e:
        raise ReportIOError(f"failed to read snapshot: {e}", str(path))

    grid = Grid2D.create(int(header["n"]), float(header["box_length"]))
    if header["reality_flag"]:
        coefficients = _expand_half_spectrum(data, grid.n)
        return SpectralField.from_coefficients(grid, coefficients, is_real=True, symmetrize=False)
    return SpectralField(grid=grid, coefficients=data, is_real=False)
