"""Flattened fluid domain: z-quadrature, strip coefficients and the g sources.

The change of variables z = (y - h)/(1 + h) maps the fluid region onto
R^2 x [-1, 0]. The velocity potential phi then solves

    Delta_x phi + d_z^2 phi = d_z g1 + g2 + div g3,
    phi(., 0) = psi,  d_z phi(., -1) = 0,

with g1, g2, g3 built from h and grad_{x,z} phi.
"""

from functools import lru_cache
from typing import Tuple

import numpy as np
from numpy.polynomial import legendre
from pydantic import BaseModel, ConfigDict
from scipy.interpolate import BarycentricInterpolator
from scipy.special import roots_legendre

from spectral.dealias import physical_eval, zero_nyquist
from spectral.field import SpectralField
from spectral.grid import Grid2D
from spectral.multipliers import derivative_symbols, gradient_coefficients
from utils.errors import ConfigurationError, DomainDegeneracyError


MAX_SURFACE_AMPLITUDE = 0.5


class StripQuadrature(BaseModel):
    """Gauss-Legendre nodes on [-1, 0] plus the two boundary points.

    ``points`` lists the interior nodes first, then z = 0, then z = -1.
    Sources are only ever sampled at the interior nodes.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n_nodes: int
    nodes: np.ndarray
    weights: np.ndarray
    points: np.ndarray

    @property
    def n_points(self) -> int:
        return self.n_nodes + 2

    @property
    def top_index(self) -> int:
        return self.n_nodes

    @property
    def bottom_index(self) -> int:
        return self.n_nodes + 1

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Integral over [-1, 0] of node samples along axis 0."""
        return np.tensordot(self.weights, values, axes=(0, 0))

    def interpolation_matrix(self, t: np.ndarray) -> np.ndarray:
        """(len(t), n_nodes) matrix taking node samples to values at t."""
        interpolant = BarycentricInterpolator(self.nodes, np.eye(self.n_nodes), axis=0)
        return np.asarray(interpolant(np.asarray(t, dtype=float)))

    def differentiation_matrix(self) -> np.ndarray:
        """d/dz of the polynomial interpolant through all of ``points``."""
        return _differentiation_matrix(tuple(self.points.tolist()))


def _rule_on(a: float, b: float, n: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = roots_legendre(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


@lru_cache(maxsize=16)
def strip_quadrature(n_nodes: int) -> StripQuadrature:
    if n_nodes < 2:
        raise ConfigurationError(f"z quadrature needs at least 2 nodes, got {n_nodes}")
    nodes, weights = _rule_on(-1.0, 0.0, n_nodes)
    for arr in (nodes, weights):
        arr.setflags(write=False)
    points = np.concatenate([nodes, [0.0, -1.0]])
    points.setflags(write=False)
    return StripQuadrature(n_nodes=n_nodes, nodes=nodes, weights=weights, points=points)


@lru_cache(maxsize=16)
def _differentiation_matrix(points: Tuple[float, ...]) -> np.ndarray:
    z = np.asarray(points)
    t = 2.0 * z + 1.0
    m = len(t)
    vander = legendre.legvander(t, m - 1)
    basis = np.linalg.solve(vander, np.eye(m))
    d = 2.0 * legendre.legvander(t, m - 2) @ legendre.legder(basis, axis=0)
    d.setflags(write=False)
    return d


class StripField(BaseModel):
    """grad_x phi and d_z phi sampled at the quadrature points.

    ``gradient`` has shape (2, n_points, n, n), ``vertical`` (n_points, n, n);
    both hold Fourier coefficients.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: Grid2D
    quadrature: StripQuadrature
    gradient: np.ndarray
    vertical: np.ndarray

    @property
    def z_nodes(self) -> np.ndarray:
        return self.quadrature.nodes

    def gradient_at(self, index: int) -> Tuple[SpectralField, SpectralField]:
        return tuple(
            SpectralField.from_coefficients(self.grid, self.gradient[a, index]) for a in range(2)
        )

    def vertical_at(self, index: int) -> SpectralField:
        return SpectralField.from_coefficients(self.grid, self.vertical[index])

    def top_vertical(self) -> SpectralField:
        return self.vertical_at(self.quadrature.top_index)

    def bottom_vertical(self) -> SpectralField:
        return self.vertical_at(self.quadrature.bottom_index)

    def top_gradient(self) -> Tuple[SpectralField, SpectralField]:
        return self.gradient_at(self.quadrature.top_index)


class StripCoefficients(BaseModel):
    """Coefficients of the flattened Laplacian at the quadrature points."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: Grid2D
    a_tilde: np.ndarray
    b_tilde: np.ndarray
    c_tilde_coef: np.ndarray

    def at(self, index: int) -> Tuple[SpectralField, Tuple[SpectralField, SpectralField], SpectralField]:
        grid = self.grid
        return (
            SpectralField.from_coefficients(grid, self.a_tilde[index]),
            (
                SpectralField.from_coefficients(grid, self.b_tilde[0, index]),
                SpectralField.from_coefficients(grid, self.b_tilde[1, index]),
            ),
            SpectralField.from_coefficients(grid, self.c_tilde_coef[index]),
        )


class GSources(BaseModel):
    """g1, g2 (shape (n_points, n, n)) and g3 (shape (2, n_points, n, n))."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    g1: np.ndarray
    g2: np.ndarray
    g3: np.ndarray

    def forcing(self, grid: Grid2D) -> np.ndarray:
        """g2 + div g3"""
        ikx, iky = derivative_symbols(grid)
        return self.g2 + ikx * self.g3[0] + iky * self.g3[1]


def check_amplitude(h: SpectralField, limit: float = MAX_SURFACE_AMPLITUDE) -> float:
    amplitude = h.sup_norm()
    if not np.isfinite(amplitude) or amplitude >= limit:
        raise DomainDegeneracyError(
            f"surface amplitude {amplitude:.4g} is not below {limit:g}; the flattened domain degenerates",
            {"sup_norm": amplitude, "limit": limit},
        )
    return amplitude


def _z_column(points: np.ndarray) -> np.ndarray:
    return np.asarray(points, dtype=float)[:, None, None]


def strip_coefficients(h: SpectralField, quadrature: StripQuadrature) -> StripCoefficients:
    check_amplitude(h)
    grid = h.grid
    z1 = _z_column(quadrature.points) + 1.0
    grad_h = gradient_coefficients(grid, h.coefficients)
    lap_h = -(grid.radius ** 2) * h.coefficients

    def a_fn(hv, gh):
        g2 = gh[0] ** 2 + gh[1] ** 2
        return (1.0 + z1 ** 2 * g2) / (1.0 + hv) ** 2

    def b_fn(hv, gh):
        return -2.0 * z1[None] * gh[:, None] / (1.0 + hv)

    def c_fn(hv, gh, lh):
        g2 = gh[0] ** 2 + gh[1] ** 2
        return -z1 * lh / (1.0 + hv) + 2.0 * z1 * g2 / (1.0 + hv) ** 2

    return StripCoefficients(
        grid=grid,
        a_tilde=physical_eval(grid, a_fn, h.coefficients, grad_h),
        b_tilde=physical_eval(grid, b_fn, h.coefficients, grad_h),
        c_tilde_coef=physical_eval(grid, c_fn, h.coefficients, grad_h, lap_h),
    )


def g_sources(h: SpectralField, phi: StripField) -> GSources:
    """g1, g2, g3 at every quadrature point, products dealiased on the 3n/2 grid."""
    check_amplitude(h)
    grid = h.grid
    z1 = _z_column(phi.quadrature.points) + 1.0
    grad_h = gradient_coefficients(grid, h.coefficients)

    def sources(hv, gh, gphi, dz):
        g2h = gh[0] ** 2 + gh[1] ** 2
        dot = gh[0] * gphi[0] + gh[1] * gphi[1]
        inv = 1.0 / (1.0 + hv)
        g1 = (2.0 * hv + hv ** 2 - z1 ** 2 * g2h) * inv ** 2 * dz + z1 * dot * inv
        g2 = z1 * g2h * dz * inv ** 2 - dot * inv
        g3 = z1 * gh[:, None] * dz * inv
        return np.concatenate([g1[None], g2[None], g3], axis=0)

    out = physical_eval(grid, sources, h.coefficients, grad_h, phi.gradient, phi.vertical)
    return GSources(g1=out[0], g2=out[1], g3=out[2:4])


def linear_profile(psi: SpectralField, quadrature: StripQuadrature) -> StripField:
    """The h = 0 solution cosh((z+1)|xi|)/cosh|xi| psi and its derivatives."""
    grid = psi.grid
    d = grid.radius[None]
    z = _z_column(quadrature.points)
    damp = 1.0 + np.exp(-2.0 * d)
    even = (np.exp(z * d) + np.exp(-(z + 2.0) * d)) / damp
    odd = (np.exp(z * d) - np.exp(-(z + 2.0) * d)) / damp
    c = zero_nyquist(psi.coefficients)
    return StripField(
        grid=grid,
        quadrature=quadrature,
        gradient=gradient_coefficients(grid, even * c),
        vertical=d * odd * c,
    )
