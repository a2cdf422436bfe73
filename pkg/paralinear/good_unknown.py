"""Good unknown omega = psi - T_B h and the paralinearization residuals.

    G(h) psi ~ T_lambda omega - T_V . grad h
    H(h)     ~ -T_l h
    |grad psi|^2/2 - (grad h . grad psi + G(h) psi)^2 / (2 (1 + |grad h|^2)) ~ T_V . grad omega - T_B G(h) psi

Each residual is quadratic in the amplitude. The DNO form is stated with
the infinite-depth principal symbol, so the finite-depth linear correction
(|grad| tanh|grad| - |grad|) omega is removed from its residual.
"""

from typing import Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from dno.solver import DnoBackend, DnoSolver
from evolution.rhs import mean_curvature
from evolution.state import SurfaceState
from paralinear.paraproduct import paraproduct
from paralinear.symmetrization import SymmetrizationSymbols, symmetrization_symbols
from spectral.dealias import physical_eval
from spectral.field import SpectralField
from spectral.multipliers import apply_radial_multiplier, gradient, gradient_coefficients
from utils.logging import get_logger


logger = get_logger("paralinear.good_unknown")


class GoodUnknown(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    b: SpectralField
    v: Tuple[SpectralField, SpectralField]
    omega: SpectralField
    g: SpectralField


def good_unknown(
    state: SurfaceState,
    backend: Optional[DnoBackend] = None,
    solver: Optional[DnoSolver] = None,
) -> GoodUnknown:
    """B = (G(h)psi + grad h . grad psi)/(1 + |grad h|^2), V = grad psi - B grad h, omega = psi - T_B h"""
    solver = solver or DnoSolver(backend)
    h, psi = state.h, state.psi
    grid = h.grid
    g = solver.apply(h, psi)
    grad_h = gradient_coefficients(grid, h.coefficients)
    grad_psi = gradient_coefficients(grid, psi.coefficients)

    def vertical(gv, gh, gp):
        return (gv + gh[0] * gp[0] + gh[1] * gp[1]) / (1.0 + gh[0] ** 2 + gh[1] ** 2)

    b = SpectralField.from_coefficients(grid, physical_eval(grid, vertical, g.coefficients, grad_h, grad_psi))
    horizontal = physical_eval(grid, lambda gp, bv, gh: gp - bv * gh, grad_psi, b.coefficients, grad_h)
    v = (SpectralField.from_coefficients(grid, horizontal[0]), SpectralField.from_coefficients(grid, horizontal[1]))
    omega = psi - paraproduct(b, h)
    return GoodUnknown(b=b, v=v, omega=omega, g=g)


def transport(v: Tuple[SpectralField, SpectralField], f: SpectralField) -> SpectralField:
    """T_V . grad f"""
    fx, fy = gradient(f)
    return paraproduct(v[0], fx) + paraproduct(v[1], fy)


class ParalinearResiduals(BaseModel):
    dno: float
    mean_curvature: float
    velocity: float

    def as_dict(self) -> Dict[str, float]:
        return self.model_dump()


def paralinear_residuals(
    state: SurfaceState,
    backend: Optional[DnoBackend] = None,
    symbols: Optional[SymmetrizationSymbols] = None,
) -> ParalinearResiduals:
    """L^2 norms of the three paralinearization residuals at ``state``."""
    h, psi = state.h, state.psi
    grid = h.grid
    symbols = symbols or symmetrization_symbols(state)
    good = good_unknown(state, backend)

    depth_correction = apply_radial_multiplier(good.omega, lambda r: r * np.tanh(r) - r, zero_value=0.0)
    dno = good.g - (symbols.lambda_full.paraproduct(good.omega) - transport(good.v, h)) - depth_correction

    curvature = mean_curvature(h) + symbols.l_full.paraproduct(h)

    grad_h = gradient_coefficients(grid, h.coefficients)
    grad_psi = gradient_coefficients(grid, psi.coefficients)

    def quadratic(gp, gh, gv):
        normal = gh[0] * gp[0] + gh[1] * gp[1] + gv
        return 0.5 * (gp[0] ** 2 + gp[1] ** 2) - 0.5 * normal ** 2 / (1.0 + gh[0] ** 2 + gh[1] ** 2)

    velocity_terms = SpectralField.from_coefficients(
        grid, physical_eval(grid, quadratic, grad_psi, grad_h, good.g.coefficients)
    )
    velocity = velocity_terms - (transport(good.v, good.omega) - paraproduct(good.b, good.g))

    residuals = ParalinearResiduals(
        dno=dno.l2_norm(exclude_mean=True),
        mean_curvature=curvature.l2_norm(exclude_mean=True),
        velocity=velocity.l2_norm(exclude_mean=True),
    )
    logger.debug("Paralinearization residuals", extra_data=residuals.as_dict())
    return residuals
