"""Low-high paraproducts T_a f.

    F[T_a f](xi) = sum_eta a^(xi - eta) theta(xi - eta, eta) f^(eta)

theta depends only on |xi - eta| / |eta|, so splitting a^ into shells of
constant |xi - eta| turns the weighted sum into ordinary products: each
shell a_rho multiplies f weighted by theta(rho, |eta|). Shells are batched
through the dealiased physical-space product.

theta(., 0) = 0, so the constant mode of f never reaches the output and
T_1 f = f - mean(f).
"""

from functools import lru_cache
from typing import TYPE_CHECKING, Tuple, Union

import numpy as np

from spectral.dealias import physical_eval, zero_nyquist
from spectral.field import SpectralField
from spectral.grid import Grid2D
from spectral.littlewood_paley import theta_ratio
from utils.logging import get_logger

if TYPE_CHECKING:
    from paralinear.symbol import XDependentSymbol


logger = get_logger("paralinear.paraproduct")

SHELL_BATCH = 32


@lru_cache(maxsize=16)
def _shells(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Integer |offset|^2 per lattice point and the sorted distinct values."""
    m = np.fft.fftfreq(n, d=1.0 / n).astype(int)
    mx, my = np.meshgrid(m, m, indexing="ij")
    squared = mx ** 2 + my ** 2
    squared[n // 2, :] = -1
    squared[:, n // 2] = -1
    values = np.unique(squared[squared >= 0])
    squared.setflags(write=False)
    values.setflags(write=False)
    return squared, values


def paraproduct_coefficients(grid: Grid2D, a: np.ndarray, f: np.ndarray) -> np.ndarray:
    """T_a f on raw coefficient arrays (both n x n, FFT order)."""
    a = zero_nyquist(a)
    f = zero_nyquist(f)
    squared, values = _shells(grid.n)
    live = [s for s in values if np.any(a[squared == s] != 0.0)]
    out = np.zeros(grid.shape, dtype=complex)
    radius = grid.radius

    for start in range(0, len(live), SHELL_BATCH):
        batch = live[start:start + SHELL_BATCH]
        shell_parts = np.stack([np.where(squared == s, a, 0.0) for s in batch])
        rho = np.sqrt(np.asarray(batch, dtype=float))[:, None, None] * grid.dk
        weighted = theta_ratio(rho, radius[None]) * f[None]
        out += physical_eval(grid, lambda x, y: np.sum(x * y, axis=0), shell_parts, weighted, real=False)
    return zero_nyquist(out)


def paraproduct(a: Union[SpectralField, "XDependentSymbol"], f: SpectralField) -> SpectralField:
    """T_a f for a coefficient field or an x-dependent symbol."""
    if not isinstance(a, SpectralField):
        return a.paraproduct(f)
    if not a.grid.same_as(f.grid):
        raise ValueError("paraproduct operands live on different grids")
    c = paraproduct_coefficients(f.grid, a.coefficients, f.coefficients)
    return SpectralField.from_coefficients(f.grid, c, is_real=a.is_real and f.is_real)
