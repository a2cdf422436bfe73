"""Fourier multipliers: radial symbols and the odd derivative operators."""

from typing import Callable, Optional, Tuple

import numpy as np

from spectral.field import SpectralField
from spectral.grid import Grid2D
from utils.errors import NonFiniteMultiplierError


RadialSymbol = Callable[[np.ndarray], np.ndarray]


def sample_radial(grid: Grid2D, m: RadialSymbol, zero_value: Optional[complex] = None) -> np.ndarray:
    """Sample m(|xi|) on the lattice.

    The zero mode takes ``zero_value`` when given (removable singularities),
    otherwise m(0).
    """
    r = grid.radius
    values = np.empty(grid.shape, dtype=complex)
    nonzero = r > 0
    with np.errstate(all="ignore"):
        values[nonzero] = m(r[nonzero])
        values[0, 0] = m(np.zeros(1))[0] if zero_value is None else zero_value
    bad = ~np.isfinite(values)
    if bad.any():
        index = tuple(int(i) for i in np.argwhere(bad)[0])
        offset = grid.lattice_offset(index)
        raise NonFiniteMultiplierError(
            f"multiplier is not finite at lattice point {offset} (|xi|={grid.radius[index]:.6g})",
            offset,
        )
    return values


def apply_radial_multiplier(
    f: SpectralField, m: RadialSymbol, zero_value: Optional[complex] = None
) -> SpectralField:
    values = sample_radial(f.grid, m, zero_value)
    keeps_real = f.is_real and bool(np.all(values.imag == 0.0))
    return SpectralField.from_coefficients(f.grid, f.coefficients * values, is_real=keeps_real)


def derivative_symbols(grid: Grid2D) -> Tuple[np.ndarray, np.ndarray]:
    """i*xi_1, i*xi_2 with the Nyquist row and column zeroed."""
    ikx = 1j * np.where(grid.nyquist_mask, 0.0, grid.kx)
    iky = 1j * np.where(grid.nyquist_mask, 0.0, grid.ky)
    return ikx, iky


def gradient(f: SpectralField) -> Tuple[SpectralField, SpectralField]:
    ikx, iky = derivative_symbols(f.grid)
    return (
        SpectralField(grid=f.grid, coefficients=f.coefficients * ikx, is_real=f.is_real),
        SpectralField(grid=f.grid, coefficients=f.coefficients * iky, is_real=f.is_real),
    )


def gradient_coefficients(grid: Grid2D, coefficients: np.ndarray) -> np.ndarray:
    """Stacked gradient, output shape (2, ...) for batched input (..., n, n)."""
    ikx, iky = derivative_symbols(grid)
    return np.stack([coefficients * ikx, coefficients * iky], axis=0)


def divergence(vx: SpectralField, vy: SpectralField) -> SpectralField:
    ikx, iky = derivative_symbols(vx.grid)
    return SpectralField(
        grid=vx.grid,
        coefficients=vx.coefficients * ikx + vy.coefficients * iky,
        is_real=vx.is_real and vy.is_real,
    )


def laplacian(f: SpectralField) -> SpectralField:
    r2 = f.grid.radius ** 2
    return SpectralField(grid=f.grid, coefficients=-r2 * f.coefficients, is_real=f.is_real)


def dtanh_symbol(r: np.ndarray) -> np.ndarray:
    """|xi| tanh|xi|, the flat-bottom Dirichlet-Neumann symbol."""
    return r * np.tanh(r)


def apply_dtanh(f: SpectralField) -> SpectralField:
    return apply_radial_multiplier(f, dtanh_symbol, zero_value=0.0)
