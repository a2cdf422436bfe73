"""Pseudo-spectral products with 3/2-rule zero padding."""

from typing import Callable

import numpy as np

from spectral.field import SpectralField, to_coefficients, to_physical
from spectral.grid import Grid2D


def zero_nyquist(coefficients: np.ndarray) -> np.ndarray:
    out = np.array(coefficients, dtype=complex)
    half = out.shape[-1] // 2
    out[..., half, :] = 0.0
    out[..., :, half] = 0.0
    return out


def pad(coefficients: np.ndarray, size: int = None) -> np.ndarray:
    """Embed n x n coefficients into a larger lattice (default 3n/2), Nyquist row dropped."""
    n = coefficients.shape[-1]
    m = size or 3 * n // 2
    offset = (m - n) // 2
    shifted = np.fft.fftshift(zero_nyquist(coefficients), axes=(-2, -1))
    padded = np.zeros(coefficients.shape[:-2] + (m, m), dtype=complex)
    padded[..., offset:offset + n, offset:offset + n] = shifted
    return np.fft.ifftshift(padded, axes=(-2, -1))


def truncate(coefficients: np.ndarray, n: int) -> np.ndarray:
    m = coefficients.shape[-1]
    offset = (m - n) // 2
    shifted = np.fft.fftshift(coefficients, axes=(-2, -1))
    inner = shifted[..., offset:offset + n, offset:offset + n]
    return zero_nyquist(np.fft.ifftshift(inner, axes=(-2, -1)))


def physical_eval(
    grid: Grid2D,
    fn: Callable[..., np.ndarray],
    *coefficient_arrays: np.ndarray,
    real: bool = True,
) -> np.ndarray:
    """Evaluate ``fn`` pointwise on the padded grid and return coefficients.

    Inputs may carry leading batch axes; ``fn`` receives physical values on
    the 3n/2 grid and must return an array of the broadcast batch shape.
    Exact for products of two band-limited inputs.
    """
    n = grid.n
    values = [to_physical(pad(c), real=real) for c in coefficient_arrays]
    result = fn(*values)
    out = truncate(to_coefficients(result), n)
    return out


def product(f: SpectralField, g: SpectralField) -> SpectralField:
    is_real = f.is_real and g.is_real
    c = physical_eval(f.grid, np.multiply, f.coefficients, g.coefficients, real=is_real)
    return SpectralField.from_coefficients(f.grid, c, is_real=is_real)


def pointwise(fn: Callable[..., np.ndarray], *fields: SpectralField, is_real: bool = True) -> SpectralField:
    grid = fields[0].grid
    c = physical_eval(grid, fn, *(f.coefficients for f in fields), real=all(f.is_real for f in fields))
    return SpectralField.from_coefficients(grid, c, is_real=is_real)


def refined_physical(coefficients: np.ndarray, factor: int = 2, real: bool = False) -> np.ndarray:
    """Values of the band-limited field on a grid ``factor`` times finer."""
    n = coefficients.shape[-1]
    if factor == 1:
        return to_physical(zero_nyquist(coefficients), real=real)
    return to_physical(pad(coefficients, factor * n), real=real)
