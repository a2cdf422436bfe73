"""Dirichlet-Neumann operator G(h)psi.

Four backends share one interface: the linear and quadratic Taylor
truncations, the cubic truncation whose degree-three part is extracted from
fixed-point solves, and the full fixed-point solve of the strip problem.
"""

from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from dno.kernels import strip_kernels
from dno.strip import (
    StripField,
    check_amplitude,
    g_sources,
    linear_profile,
    strip_coefficients,
    strip_quadrature,
)
from spectral.dealias import physical_eval, zero_nyquist
from spectral.field import SpectralField
from spectral.multipliers import apply_dtanh, derivative_symbols, gradient_coefficients
from utils.errors import DivergenceError
from utils.logging import get_logger


logger = get_logger("dno.solver")


class BackendKind(str, Enum):
    TAYLOR1 = "taylor1"
    TAYLOR2 = "taylor2"
    TAYLOR3 = "taylor3"
    FIXED_POINT = "fixed_point"


class DnoBackend(BaseModel):
    """Backend selection plus the fixed-point knobs (also used by taylor3)."""

    model_config = ConfigDict(frozen=True, use_enum_values=False)

    kind: BackendKind = BackendKind.FIXED_POINT
    tol: float = Field(default=1e-13, gt=0, description="relative increment at which Picard stops")
    max_iter: int = Field(default=60, ge=1)
    z_nodes: int = Field(default=32, ge=2, description="Gauss-Legendre nodes on [-1, 0]")
    polarization_step: float = Field(default=1.0, gt=0, description="largest taylor3 step d; G(s h) is sampled at s = +-d, +-2d")
    polarization_amplitude: float = Field(
        default=0.05, gt=0, lt=0.25, description="taylor3 shrinks d so that sup|d h| stays at or below this"
    )

    @classmethod
    def taylor(cls, order: int) -> "DnoBackend":
        return cls(kind=BackendKind(f"taylor{order}"))

    @classmethod
    def fixed_point(cls, tol: float = 1e-13, max_iter: int = 60, z_nodes: int = 32) -> "DnoBackend":
        return cls(kind=BackendKind.FIXED_POINT, tol=tol, max_iter=max_iter, z_nodes=z_nodes)


class FixedPointReport(BaseModel):
    converged: bool
    iterations: int
    increments: List[float]
    contraction_factors: List[float]
    laplace_residual: float = float("nan")
    bottom_residual: float = float("nan")
    top_residual: float = float("nan")
    g1_bottom: float = float("nan")

    def to_dict(self) -> Dict:
        return self.model_dump()


def _norm(*arrays: np.ndarray) -> float:
    return float(np.sqrt(sum(np.sum(np.abs(a) ** 2) for a in arrays)))


def fixed_point_solve(
    h: SpectralField,
    psi: SpectralField,
    tol: float = 1e-13,
    max_iter: int = 60,
    z_nodes: int = 32,
) -> Tuple[StripField, FixedPointReport]:
    """Picard iteration on grad_{x,z} phi from the flat-surface profile.

    Stops when the relative increment drops below ``tol``. Raises
    DivergenceError with the contraction history when it does not.
    """
    check_amplitude(h)
    grid = psi.grid
    quadrature = strip_quadrature(z_nodes)
    kernels = strip_kernels(grid, z_nodes)
    nodes = slice(0, quadrature.n_nodes)

    linear = linear_profile(psi, quadrature)
    phi = linear
    increments: List[float] = []
    factors: List[float] = []
    converged = False

    for _ in range(max_iter):
        g = g_sources(h, phi)
        grad_part, vert_part = kernels.apply(g.forcing(grid)[nodes], g.g1[nodes])
        gradient = linear.gradient + grad_part
        vertical = linear.vertical + zero_nyquist(g.g1) + vert_part

        change = _norm(gradient - phi.gradient, vertical - phi.vertical)
        scale = _norm(gradient, vertical)
        increment = change / scale if scale > 0 else 0.0
        if not np.isfinite(increment):
            raise DivergenceError("fixed-point iterate is not finite", factors)
        if increments and increments[-1] > 0:
            factors.append(increment / increments[-1])
        increments.append(increment)
        phi = StripField(grid=grid, quadrature=quadrature, gradient=gradient, vertical=vertical)
        if increment < tol:
            converged = True
            break

    if not converged:
        logger.warning(
            f"Fixed point did not reach tol {tol:g} in {max_iter} iterations",
            extra_data={"increments": increments[-5:], "factors": factors[-5:]},
        )
        raise DivergenceError(
            f"fixed point did not converge in {max_iter} iterations (last increment {increments[-1]:.3e})",
            factors,
        )

    report = FixedPointReport(
        converged=True,
        iterations=len(increments),
        increments=increments,
        contraction_factors=factors,
        **strip_residuals(h, psi, phi),
    )
    logger.debug(
        f"Fixed point converged in {report.iterations} iterations",
        extra_data={"laplace_residual": report.laplace_residual, "bottom_residual": report.bottom_residual},
    )
    return phi, report


def strip_residuals(h: SpectralField, psi: SpectralField, phi: StripField) -> Dict[str, float]:
    """Laplace residual ||P phi|| (max over interior nodes) and both boundary residuals."""
    grid = psi.grid
    q = phi.quadrature
    coeffs = strip_coefficients(h, q)
    ikx, iky = derivative_symbols(grid)

    d2 = np.tensordot(q.differentiation_matrix(), phi.vertical, axes=(1, 0))
    grad_vertical = gradient_coefficients(grid, phi.vertical)
    lap = ikx * phi.gradient[0] + iky * phi.gradient[1]

    def variable_part(a, b, c, dzz, gv, dz):
        return a * dzz + b[0] * gv[0] + b[1] * gv[1] + c * dz

    residual = lap + physical_eval(
        grid, variable_part, coeffs.a_tilde, coeffs.b_tilde, coeffs.c_tilde_coef, d2, grad_vertical, phi.vertical
    )
    residual = zero_nyquist(residual)
    interior = residual[: q.n_nodes]
    laplace = max(grid.box_length * _norm(interior[j]) for j in range(q.n_nodes))

    top_x, top_y = phi.top_gradient()
    psi_x, psi_y = (SpectralField.from_coefficients(grid, c) for c in gradient_coefficients(grid, psi.coefficients))
    g1_bottom = g_sources(h, phi).g1[q.bottom_index]
    return {
        "laplace_residual": float(laplace),
        "bottom_residual": phi.bottom_vertical().l2_norm(),
        "top_residual": float(np.hypot((top_x - psi_x).l2_norm(), (top_y - psi_y).l2_norm())),
        "g1_bottom": grid.box_length * _norm(g1_bottom),
    }


def surface_trace(h: SpectralField, psi: SpectralField, phi: StripField) -> SpectralField:
    """(1 + |grad h|^2)/(1 + h) d_z phi(0) - grad psi . grad h"""
    grid = psi.grid
    grad_h = gradient_coefficients(grid, h.coefficients)
    grad_psi = gradient_coefficients(grid, psi.coefficients)

    def trace(hv, gh, gp, dz0):
        return (1.0 + gh[0] ** 2 + gh[1] ** 2) / (1.0 + hv) * dz0 - (gp[0] * gh[0] + gp[1] * gh[1])

    c = physical_eval(grid, trace, h.coefficients, grad_h, grad_psi, phi.vertical[phi.quadrature.top_index])
    return SpectralField.from_coefficients(grid, c, is_real=True)


def quadratic_term(h: SpectralField, psi: SpectralField) -> SpectralField:
    """-div(h grad psi) - |grad|tanh|grad| (h |grad|tanh|grad| psi)"""
    grid = psi.grid
    ikx, iky = derivative_symbols(grid)
    grad_psi = gradient_coefficients(grid, psi.coefficients)
    flux = physical_eval(grid, lambda hv, gp: hv * gp, h.coefficients, grad_psi)
    divergence = ikx * flux[0] + iky * flux[1]
    inner = apply_dtanh(psi)
    product = SpectralField.from_coefficients(
        grid, physical_eval(grid, np.multiply, h.coefficients, inner.coefficients)
    )
    return SpectralField.from_coefficients(grid, -divergence) - apply_dtanh(product)


class DnoSolver:
    """G(h)psi through one configured backend.

    Keeps the last fixed-point report for diagnostics.
    """

    def __init__(self, backend: Optional[DnoBackend] = None, context: Optional[Dict] = None):
        self.backend = backend or DnoBackend()
        self.logger = get_logger(f"dno.{self.backend.kind.value}", context)
        self.last_report: Optional[FixedPointReport] = None
        self.solves = 0

    def solve(self, h: SpectralField, psi: SpectralField) -> StripField:
        phi, report = fixed_point_solve(
            h, psi, tol=self.backend.tol, max_iter=self.backend.max_iter, z_nodes=self.backend.z_nodes
        )
        self.last_report = report
        self.solves += 1
        return phi

    def fixed_point(self, h: SpectralField, psi: SpectralField) -> SpectralField:
        return surface_trace(h, psi, self.solve(h, psi))

    def polarization_step(self, h: SpectralField) -> float:
        """d = min(polarization_step, polarization_amplitude / sup|h|); 0 for a flat surface."""
        amplitude = h.sup_norm()
        if amplitude == 0.0:
            return 0.0
        return min(self.backend.polarization_step, self.backend.polarization_amplitude / amplitude)

    def cubic_term(self, h: SpectralField, psi: SpectralField) -> SpectralField:
        """Part of G(s h)psi quadratic in s, from fixed-point solves on +-d h and +-2d h.

        With E(d) = G(d h) + G(-d h) - 2 G(0), the combination
        (16 E(d) - E(2d)) / (24 d^2) cancels the quartic term and does not
        depend on d otherwise. d is scaled down with the amplitude of h so
        that every solve stays well inside the contraction range.
        """
        step = self.polarization_step(h)
        if step == 0.0:
            return SpectralField.zeros(h.grid)
        base = apply_dtanh(psi)

        def even_part(s: float) -> np.ndarray:
            plus = self.fixed_point(h * s, psi).coefficients
            minus = self.fixed_point(h * (-s), psi).coefficients
            return plus + minus - 2.0 * base.coefficients

        c = (16.0 * even_part(step) - even_part(2.0 * step)) / (24.0 * step ** 2)
        # G(h)psi integrates to zero for every h
        c[0, 0] = 0.0
        return SpectralField.from_coefficients(h.grid, c, is_real=True)

    def apply(self, h: SpectralField, psi: SpectralField) -> SpectralField:
        kind = self.backend.kind
        if kind == BackendKind.FIXED_POINT:
            return self.fixed_point(h, psi)
        result = apply_dtanh(psi)
        if kind in (BackendKind.TAYLOR2, BackendKind.TAYLOR3):
            check_amplitude(h)
            result = result + quadratic_term(h, psi)
        if kind == BackendKind.TAYLOR3:
            result = result + self.cubic_term(h, psi)
        return result


def dno_apply(h: SpectralField, psi: SpectralField, backend: Optional[DnoBackend] = None) -> SpectralField:
    return DnoSolver(backend).apply(h, psi)
