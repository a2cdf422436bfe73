"""Integral kernels of the strip problem.

Each kernel has the form K_i(z, s) = [grad/(2|grad|) A_i, B_i] with scalar
A_i, B_i depending on (z, s, |xi|). Every exponential below has a
non-positive exponent for z, s in [-1, 0], so nothing overflows at large
|xi|. Integrals in s are done by product integration: sources are known at
the Gauss nodes, interpolated, and integrated separately on [-1, z] and
[z, 0] so the kink at s = z never sits inside a quadrature panel.
"""

from functools import lru_cache
from typing import Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from dno.strip import StripQuadrature, _rule_on, strip_quadrature
from spectral.dealias import zero_nyquist
from spectral.field import SpectralField
from spectral.grid import Grid2D
from spectral.multipliers import derivative_symbols
from utils.errors import ConfigurationError
from utils.logging import get_logger


KernelName = Literal["K1", "K2", "K3"]

logger = get_logger("dno.kernels")


def kernel_components(which: str, z, s, d) -> Tuple[np.ndarray, np.ndarray]:
    """(A, B) of K1, K2, K3, or of K3 times sign(z - s) for ``which="K3s"``."""
    z = np.asarray(z, dtype=float)
    s = np.asarray(s, dtype=float)
    d = np.asarray(d, dtype=float)
    damp = 1.0 + np.exp(-2.0 * d)
    if which == "K1":
        a = (np.exp((s - z - 2.0) * d) - np.exp((s + z - 2.0) * d)) / damp + np.exp((z + s) * d)
        b = -0.5 * (np.exp((z + s - 2.0) * d) + np.exp((s - z - 2.0) * d)) / damp + 0.5 * np.exp((z + s) * d)
        return a, b
    if which == "K2":
        a = (np.exp(-(z + s + 2.0) * d) - np.exp((z - s - 2.0) * d)) / damp
        b = -0.5 * (np.exp((z - s - 2.0) * d) + np.exp(-(z + s + 2.0) * d)) / damp
        return a, b
    decay = np.exp(-np.abs(z - s) * d)
    if which == "K3":
        return decay, 0.5 * decay * np.sign(s - z)
    if which == "K3s":
        return decay * np.sign(z - s), -0.5 * decay * (z != s)
    raise ValueError(f"unknown kernel {which!r}")


def _integrated(which: str, targets: np.ndarray, radii: np.ndarray, quadrature: StripQuadrature):
    """Matrices W with W[u, t, l] = int K(z_t, s, r_u) L_l(s) ds for both components.

    L_l is the Lagrange basis on the interior nodes.
    """
    nz = quadrature.n_nodes
    wa = np.zeros((len(radii), len(targets), nz))
    wb = np.zeros_like(wa)
    d = radii[:, None]
    for t, z in enumerate(targets):
        for lo, hi in ((-1.0, z), (z, 0.0)):
            if hi - lo <= 0.0:
                continue
            points, weights = _rule_on(lo, hi, nz)
            interp = quadrature.interpolation_matrix(points)
            a, b = kernel_components(which, z, points[None, :], d)
            wa[:, t] += (a * weights) @ interp
            wb[:, t] += (b * weights) @ interp
    return wa, wb


class StripKernels(BaseModel):
    """Integrated kernels on one (grid, quadrature) pair, indexed by distinct |xi|."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: Grid2D
    quadrature: StripQuadrature
    radii: np.ndarray
    inverse: np.ndarray
    forcing_gradient: np.ndarray
    forcing_vertical: np.ndarray
    g1_gradient: np.ndarray
    g1_vertical: np.ndarray

    def contract(self, matrix: np.ndarray, source: np.ndarray) -> np.ndarray:
        """out[t] = sum_l W[|xi|, t, l] source[l], per lattice point."""
        n = self.grid.n
        nz = self.quadrature.n_nodes
        flat = source.reshape(nz, n * n)
        out = np.zeros((matrix.shape[1], n * n), dtype=complex)
        for l in range(nz):
            out += matrix[self.inverse, :, l].T * flat[l]
        return out.reshape(matrix.shape[1], n, n)

    def apply(self, forcing: np.ndarray, g1: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Integral part of the fixed-point map.

        Returns the gradient (2, n_points, n, n) and vertical (n_points, n, n)
        contributions of g2 + div g3 and g1 sampled at the interior nodes.
        """
        ikx, iky = derivative_symbols(self.grid)
        scalar = self.contract(self.forcing_gradient, forcing) + self.contract(self.g1_gradient, g1)
        vertical = self.contract(self.forcing_vertical, forcing) + self.contract(self.g1_vertical, g1)
        gradient = np.stack([ikx * scalar, iky * scalar])
        return zero_nyquist(gradient), zero_nyquist(vertical)


@lru_cache(maxsize=8)
def _build(n: int, box_length: float, n_nodes: int) -> StripKernels:
    grid = Grid2D.create(n, box_length)
    quadrature = strip_quadrature(n_nodes)
    radii, inverse = np.unique(grid.radius.ravel(), return_inverse=True)
    targets = quadrature.points
    w = {name: _integrated(name, targets, radii, quadrature) for name in ("K1", "K2", "K3", "K3s")}
    d = radii[:, None, None]
    half_inverse = np.where(d > 0, 0.5 / np.where(d > 0, d, 1.0), 0.0)

    (a1, b1), (a2, b2), (a3, b3), (a3s, b3s) = w["K1"], w["K2"], w["K3"], w["K3s"]
    logger.debug(
        f"Built strip kernels for n={n}, {n_nodes} z-nodes",
        extra_data={"distinct_radii": len(radii), "targets": len(targets)},
    )
    return StripKernels(
        grid=grid,
        quadrature=quadrature,
        radii=radii,
        inverse=inverse.reshape(-1),
        # grad/(2|grad|) is applied as i xi * half_inverse; the xi = 0 entry is never used
        forcing_gradient=(a1 - a2 - a3) * half_inverse,
        forcing_vertical=b1 - b2 - b3,
        g1_gradient=0.5 * (a3s - a1 - a2),
        g1_vertical=d * (b3s - b1 - b2),
    )


def strip_kernels(grid: Grid2D, n_nodes: int) -> StripKernels:
    return _build(grid.n, float(grid.box_length), int(n_nodes))


def _source_array(source: Union[np.ndarray, Sequence[SpectralField]]) -> Tuple[np.ndarray, bool]:
    if isinstance(source, np.ndarray):
        return source, False
    return np.stack([f.coefficients for f in source]), all(f.is_real for f in source)


def kernel_apply(
    which: KernelName,
    source: Union[np.ndarray, Sequence[SpectralField]],
    z: float,
    grid: Grid2D,
    n_nodes: Optional[int] = None,
) -> Tuple[Tuple[SpectralField, SpectralField], SpectralField]:
    """int_{-1}^{0} K_i(z, s) source(s) ds for a source sampled at the interior nodes.

    Returns the gradient component as a pair of fields and the vertical component.
    """
    coefficients, is_real = _source_array(source)
    nz = coefficients.shape[0] if n_nodes is None else n_nodes
    if nz < 2:
        raise ConfigurationError(f"kernel quadrature needs at least 2 nodes, got {nz}")
    if coefficients.shape[0] != nz:
        raise ValueError(f"source has {coefficients.shape[0]} node samples, quadrature has {nz}")
    if not -1.0 <= z <= 0.0:
        raise ValueError(f"z must lie in [-1, 0], got {z}")

    quadrature = strip_quadrature(nz)
    radii, inverse = np.unique(grid.radius.ravel(), return_inverse=True)
    wa, wb = _integrated(which, np.array([float(z)]), radii, quadrature)
    n = grid.n
    flat = coefficients.reshape(nz, n * n)
    a_part = np.einsum("pl,lp->p", wa[inverse.reshape(-1), 0, :], flat).reshape(n, n)
    b_part = np.einsum("pl,lp->p", wb[inverse.reshape(-1), 0, :], flat).reshape(n, n)

    ikx, iky = derivative_symbols(grid)
    r = grid.radius
    half_inverse = np.where(r > 0, 0.5 / np.where(r > 0, r, 1.0), 0.0)
    gradient = (
        SpectralField(grid=grid, coefficients=zero_nyquist(ikx * half_inverse * a_part), is_real=is_real),
        SpectralField(grid=grid, coefficients=zero_nyquist(iky * half_inverse * a_part), is_real=is_real),
    )
    vertical = SpectralField(grid=grid, coefficients=zero_nyquist(b_part), is_real=is_real)
    return gradient, vertical
