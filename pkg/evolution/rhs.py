"""Right-hand sides of the capillary water wave system.

    d_t h   = G(h) psi
    d_t psi = H(h) - |grad psi|^2 / 2 + (G(h) psi + grad h . grad psi)^2 / (2 (1 + |grad h|^2))

with H(h) = div(grad h / sqrt(1 + |grad h|^2)). The quadratic truncation is
written in (h, psi_tilde), psi_tilde = psi - T_{|grad|tanh|grad| psi} h.
"""

from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np

from dispersion.laws import Lambda_tilde
from dno.solver import DnoBackend, DnoSolver, quadratic_term
from dno.strip import check_amplitude
from dno.symbols import C_MINUS, C_PLUS
from evolution.bilinear import BilinearSymbol, SymbolPath, apply_bilinear
from evolution.state import ComplexState, SurfaceState, from_linear_variable
from paralinear.paraproduct import paraproduct
from spectral.dealias import physical_eval
from spectral.field import SpectralField
from spectral.littlewood_paley import theta_cutoff, theta_tilde
from spectral.multipliers import (
    apply_dtanh,
    apply_radial_multiplier,
    derivative_symbols,
    gradient_coefficients,
    laplacian,
)
from utils.logging import get_logger


Rates = Tuple[SpectralField, SpectralField]


class Model(str, Enum):
    LINEAR = "linear"
    QUADRATIC = "quadratic"
    FULL = "full"


class QuadraticVariant(str, Enum):
    """Placement of the Laplacian in the last paraproduct of the psi_tilde equation."""

    LITERAL = "literal"  # T_{|grad|tanh|grad| Lap h} h
    SWAPPED = "swapped"  # T_{Lap |grad|tanh|grad| psi_tilde} h


def _real(grid, c: np.ndarray) -> SpectralField:
    return SpectralField.from_coefficients(grid, c, is_real=True)


def mean_curvature(h: SpectralField) -> SpectralField:
    """div(grad h / sqrt(1 + |grad h|^2))"""
    grid = h.grid
    ikx, iky = derivative_symbols(grid)
    grad_h = gradient_coefficients(grid, h.coefficients)
    flux = physical_eval(grid, lambda gh: gh / np.sqrt(1.0 + gh[0] ** 2 + gh[1] ** 2), grad_h)
    return _real(grid, ikx * flux[0] + iky * flux[1])


def rhs_linear(state: SurfaceState) -> Rates:
    """(|grad|tanh|grad| psi, Lap h)"""
    return apply_dtanh(state.psi), laplacian(state.h)


def _potential_rate(h: SpectralField, psi: SpectralField, g: SpectralField) -> SpectralField:
    grid = h.grid
    grad_h = gradient_coefficients(grid, h.coefficients)
    grad_psi = gradient_coefficients(grid, psi.coefficients)

    def bernoulli(gv, gh, gp):
        slope2 = gh[0] ** 2 + gh[1] ** 2
        normal = gv + gh[0] * gp[0] + gh[1] * gp[1]
        return -0.5 * (gp[0] ** 2 + gp[1] ** 2) + normal ** 2 / (2.0 * (1.0 + slope2))

    return mean_curvature(h) + _real(grid, physical_eval(grid, bernoulli, g.coefficients, grad_h, grad_psi))


def rhs_full(state: SurfaceState, backend: Optional[DnoBackend] = None) -> Rates:
    return WaterWaveRhs(Model.FULL, backend)(state)


def rhs_quadratic(state: SurfaceState, variant: QuadraticVariant = QuadraticVariant.LITERAL) -> Rates:
    """Quadratic truncation in (h, psi_tilde); ``state.psi`` holds psi_tilde."""
    check_amplitude(state.h)
    h, psi_t = state.h, state.psi
    grid = h.grid
    a_psi = apply_dtanh(psi_t)

    dh = a_psi + apply_dtanh(paraproduct(a_psi, h)) + quadratic_term(h, psi_t)

    grad_psi = gradient_coefficients(grid, psi_t.coefficients)
    squares = physical_eval(
        grid,
        lambda gp, ap: -0.5 * (gp[0] ** 2 + gp[1] ** 2) + 0.5 * ap ** 2,
        grad_psi,
        a_psi.coefficients,
    )
    if QuadraticVariant(variant) == QuadraticVariant.LITERAL:
        low = apply_dtanh(laplacian(h))
    else:
        low = laplacian(a_psi)
    dpsi = laplacian(h) + _real(grid, squares) - paraproduct(a_psi, a_psi) - paraproduct(low, h)
    return dh, dpsi


def modified_potential_rate(state: SurfaceState, dh: SpectralField, dpsi: SpectralField) -> SpectralField:
    """d_t psi_tilde = d_t psi - T_{A d_t psi} h - T_{A psi} d_t h, A = |grad|tanh|grad|."""
    return dpsi - paraproduct(apply_dtanh(dpsi), state.h) - paraproduct(apply_dtanh(state.psi), dh)


class WaterWaveRhs:
    """Right-hand side of one model, split into the linear part and the rest.

    For Model.QUADRATIC the psi slot of every state holds psi_tilde.
    """

    def __init__(
        self,
        model: Model = Model.FULL,
        backend: Optional[DnoBackend] = None,
        variant: QuadraticVariant = QuadraticVariant.LITERAL,
        context: Optional[Dict] = None,
    ):
        self.model = Model(model)
        self.variant = QuadraticVariant(variant)
        self.solver = DnoSolver(backend, context)
        self.logger = get_logger(f"evolution.rhs.{self.model.value}", context)
        self.evaluations = 0

    def __call__(self, state: SurfaceState) -> Rates:
        self.evaluations += 1
        if self.model == Model.LINEAR:
            return rhs_linear(state)
        if self.model == Model.QUADRATIC:
            return rhs_quadratic(state, self.variant)
        check_amplitude(state.h)
        g = self.solver.apply(state.h, state.psi)
        return g, _potential_rate(state.h, state.psi, g)

    def nonlinear(self, state: SurfaceState) -> Rates:
        """Rates minus the linear part, subtracted coefficient-wise."""
        if self.model == Model.LINEAR:
            zero = SpectralField.zeros(state.grid)
            return zero, zero
        dh, dpsi = self(state)
        lh, lpsi = rhs_linear(state)
        return dh - lh, dpsi - lpsi

    def complex_nonlinear(self, w: SpectralField) -> SpectralField:
        """Lambda_tilde N_h + i N_psi at w = Lambda_tilde h + i psi."""
        h, psi = from_linear_variable(w)
        nh, npsi = self.nonlinear(SurfaceState(h=h, psi=psi))
        lifted = apply_radial_multiplier(nh, Lambda_tilde, zero_value=1.0)
        return SpectralField(
            grid=w.grid, coefficients=lifted.coefficients + 1j * npsi.coefficients, is_real=False
        )


# quadratic symbols of the complex equation

def _sign(s) -> int:
    if s in (1, "+", "plus"):
        return 1
    if s in (-1, "-", "minus"):
        return -1
    raise ValueError(f"sign must be +1 or -1, got {s!r}")


def sign_coefficient(s) -> complex:
    """c_+ = -i/2, c_- = i/2"""
    return C_PLUS if _sign(s) > 0 else C_MINUS


def _dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.sum(a * b, axis=-1)


def quadratic_symbol_q(mu, nu, xi_minus_eta, eta) -> np.ndarray:
    """q_{mu,nu}(xi - eta, eta) of the complex equation.

    The theta_tilde branch covers comparable frequencies, the theta branch
    the region where |eta| is much smaller than |xi - eta|; inputs are
    arranged so that eta is always the low one.
    """
    c_mu = sign_coefficient(mu)
    c_nu = sign_coefficient(nu)
    zeta = np.asarray(xi_minus_eta, dtype=float)
    eta = np.asarray(eta, dtype=float)
    zeta, eta = np.broadcast_arrays(zeta, eta)
    xi = zeta + eta

    r_xi = np.linalg.norm(xi, axis=-1)
    r_zeta = np.linalg.norm(zeta, axis=-1)
    r_eta = np.linalg.norm(eta, axis=-1)
    t_xi, t_zeta, t_eta = np.tanh(r_xi), np.tanh(r_zeta), np.tanh(r_eta)
    lt_xi, lt_zeta, lt_eta = Lambda_tilde(r_xi), Lambda_tilde(r_zeta), Lambda_tilde(r_eta)

    comparable = (
        c_nu * lt_xi / (2.0 * lt_zeta) * (_dot(xi, eta) - r_xi * r_eta * t_xi * t_eta)
        + 0.5j * c_mu * c_nu * (_dot(zeta, eta) + r_zeta * r_eta * t_zeta * t_eta)
    )
    low_high = (
        c_mu * lt_xi / (2.0 * lt_eta) * (_dot(zeta, xi) - r_zeta * r_xi * t_xi * t_zeta)
        + c_nu * lt_xi / (2.0 * lt_zeta) * _dot(xi, eta)
        + 1j * c_mu * c_nu * _dot(zeta, eta)
        + 0.25j * r_eta ** 2 * t_eta ** 2
    )
    return comparable * theta_tilde(eta, zeta) + low_high * theta_cutoff(eta, zeta)


def quadratic_symbol(mu, nu) -> BilinearSymbol:
    m, n = _sign(mu), _sign(nu)
    label = f"q_{'+' if m > 0 else '-'}{'+' if n > 0 else '-'}"
    return BilinearSymbol.from_function(lambda a, b: quadratic_symbol_q(m, n, a, b), name=label)


def complex_quadratic_terms(u: ComplexState, limits: Optional[dict] = None) -> SpectralField:
    """sum over (mu, nu) of Q_{mu,nu}(u^mu, u^nu), dense path."""
    total = SpectralField.zeros(u.grid, is_real=False)
    for mu in (1, -1):
        for nu in (1, -1):
            term = apply_bilinear(quadratic_symbol(mu, nu), u.signed(mu), u.signed(nu), SymbolPath.DENSE, limits)
            total = total + term
    return total
