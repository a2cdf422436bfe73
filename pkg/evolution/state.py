"""Surface variables (h, psi) and the complex unknown u = Lambda_tilde h + i psi_tilde."""

from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from dispersion.laws import Lambda_tilde, inverse_Lambda_tilde
from dno.strip import check_amplitude
from dno.symbols import C_MINUS, C_PLUS
from paralinear.paraproduct import paraproduct
from spectral.field import SpectralField
from spectral.grid import Grid2D
from spectral.multipliers import apply_dtanh, apply_radial_multiplier
from utils.errors import DivergenceError
from utils.logging import get_logger


logger = get_logger("evolution.state")


class SurfaceState(BaseModel):
    """Height h and surface potential psi at one time.

    The mean of psi is a gauge: it is carried along but never enters a norm.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    h: SpectralField
    psi: SpectralField
    time: float = 0.0

    def model_post_init(self, __context) -> None:
        if not (self.h.is_real and self.psi.is_real):
            raise ValueError("surface height and potential must be real fields")
        if not self.h.grid.same_as(self.psi.grid):
            raise ValueError("h and psi live on different grids")
        check_amplitude(self.h)

    @property
    def grid(self) -> Grid2D:
        return self.h.grid

    @classmethod
    def zero(cls, grid: Grid2D, time: float = 0.0) -> "SurfaceState":
        return cls(h=SpectralField.zeros(grid), psi=SpectralField.zeros(grid), time=time)

    @classmethod
    def from_physical(cls, grid: Grid2D, h: np.ndarray, psi: np.ndarray, time: float = 0.0) -> "SurfaceState":
        return cls(
            h=SpectralField.from_physical(grid, np.real(h)),
            psi=SpectralField.from_physical(grid, np.real(psi)),
            time=time,
        )

    def scaled(self, factor: float) -> "SurfaceState":
        return SurfaceState(h=self.h * factor, psi=self.psi * factor, time=self.time)

    def amplitude(self) -> float:
        """max(sup|h|, sup|psi - mean psi|)"""
        c = np.array(self.psi.coefficients)
        c[0, 0] = 0.0
        psi = self.psi.with_coefficients(c)
        return max(self.h.sup_norm(), psi.sup_norm())


class ComplexState(BaseModel):
    """u = Lambda_tilde h + i psi_tilde with psi_tilde = psi - T_{|grad|tanh|grad| psi} h."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    u: SpectralField
    time: float = 0.0

    @property
    def grid(self) -> Grid2D:
        return self.u.grid

    def conj(self) -> SpectralField:
        return self.u.conj()

    def signed(self, sign: int) -> SpectralField:
        """u^+ = u, u^- = conj(u)"""
        return self.u if sign > 0 else self.u.conj()

    def height(self) -> SpectralField:
        """Lambda_tilde^{-1} (u + conj u)/2"""
        return apply_radial_multiplier(self.u.real_part(), inverse_Lambda_tilde, zero_value=1.0)

    def modified_potential(self) -> SpectralField:
        """c_+ u + c_- conj u"""
        c = C_PLUS * self.u.coefficients + C_MINUS * self.u.conj().coefficients
        return SpectralField.from_coefficients(self.grid, c, is_real=True)


def modified_potential(h: SpectralField, psi: SpectralField) -> SpectralField:
    """psi_tilde = psi - T_{|grad|tanh|grad| psi} h"""
    return psi - paraproduct(apply_dtanh(psi), h)


def pack_complex(h: SpectralField, psi_tilde: SpectralField, time: float = 0.0) -> ComplexState:
    lifted = apply_radial_multiplier(h, Lambda_tilde, zero_value=1.0)
    u = SpectralField(
        grid=h.grid,
        coefficients=lifted.coefficients + 1j * psi_tilde.coefficients,
        is_real=False,
    )
    return ComplexState(u=u, time=time)


def to_complex_state(state: SurfaceState) -> ComplexState:
    return pack_complex(state.h, modified_potential(state.h, state.psi), state.time)


def to_surface_state(
    u: ComplexState, tol: float = 1e-14, max_iter: int = 50
) -> SurfaceState:
    """Recover (h, psi) from u.

    psi solves psi = psi_tilde + T_{|grad|tanh|grad| psi} h, iterated from
    psi_tilde; the map contracts for small h.
    """
    h = u.height()
    psi_tilde = u.modified_potential()
    psi = psi_tilde
    increments = []
    for _ in range(max_iter):
        updated = psi_tilde + paraproduct(apply_dtanh(psi), h)
        scale = max(updated.l2_norm(), np.finfo(float).tiny)
        increment = (updated - psi).l2_norm() / scale
        increments.append(increment)
        psi = updated
        if increment < tol:
            return SurfaceState(h=h, psi=psi, time=u.time)
    factors = [b / a for a, b in zip(increments, increments[1:]) if a > 0]
    raise DivergenceError(
        f"inverting psi_tilde did not converge in {max_iter} iterations (last increment {increments[-1]:.3e})",
        factors,
    )


def split_complex(u: ComplexState) -> Tuple[SpectralField, SpectralField]:
    """(h, psi_tilde) from u"""
    return u.height(), u.modified_potential()


def linear_variable(h: SpectralField, psi: SpectralField) -> SpectralField:
    """w = Lambda_tilde h + i psi, which solves (d_t + i Lambda) w = 0 for the linearized system."""
    return pack_complex(h, psi).u


def from_linear_variable(w: SpectralField) -> Tuple[SpectralField, SpectralField]:
    """(h, psi) from w"""
    return split_complex(ComplexState(u=w))
