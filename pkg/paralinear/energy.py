"""Symmetrized good variables and the energy built on them.

    U1 = Lambda_tilde(h + T_{p |xi|^(-1/2) - 1} h),   U2 = omega + T_{q - 1} omega
    E  = ||U1||^2 + ||U2||^2 + ||T_beta U1||^2 + ||T_beta U2||^2

The mean of U2 carries the gauge of psi and is left out of every norm.
In the variables (U1, U2) the system reads, up to good remainders,

    d_t U1 =  Lambda U2 + T_gamma U2 - T_V . grad U1
    d_t U2 = -Lambda U1 - T_gamma U1 - T_V . grad U2
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from dispersion.laws import Lambda, Lambda_tilde
from dno.solver import DnoBackend, DnoSolver
from evolution.rhs import WaterWaveRhs
from evolution.state import SurfaceState
from paralinear.good_unknown import GoodUnknown, good_unknown, transport
from paralinear.symbol import XDependentSymbol, magnitude_power
from paralinear.symmetrization import SymmetrizationSymbols, symmetrization_symbols
from spectral.field import SpectralField
from spectral.multipliers import apply_radial_multiplier
from utils.fitting import SlopeFit, loglog_slope
from utils.logging import get_logger


logger = get_logger("paralinear.energy")


class SymmetrizedEnergy(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    energy: float
    low: float
    high: float
    u1: SpectralField
    u2: SpectralField
    n0: int


def _lift(f: SpectralField) -> SpectralField:
    return apply_radial_multiplier(f, Lambda_tilde, zero_value=1.0)


def good_variables(
    state: SurfaceState, symbols: SymmetrizationSymbols, good: GoodUnknown
) -> Tuple[SpectralField, SpectralField]:
    grid = state.grid
    one = XDependentSymbol.multiplier(grid)
    height_symbol = symbols.p_full.with_multiplier(magnitude_power(-0.5)) - one
    u1 = _lift(state.h + height_symbol.named("p/|xi|^(1/2) - 1", real=True).paraproduct(state.h))
    u2 = good.omega + (symbols.q - one).named("q - 1", real=True).paraproduct(good.omega)
    return u1, u2


def symmetrized_energy(
    state: SurfaceState,
    backend: Optional[DnoBackend] = None,
    n0: int = 8,
    amplitude_order: int = 2,
    solver: Optional[DnoSolver] = None,
) -> SymmetrizedEnergy:
    symbols = symmetrization_symbols(state, amplitude_order=amplitude_order, n0=n0)
    good = good_unknown(state, backend, solver)
    u1, u2 = good_variables(state, symbols, good)
    low = u1.l2_norm() ** 2 + u2.l2_norm(exclude_mean=True) ** 2
    high = symbols.beta.paraproduct(u1).l2_norm() ** 2 + symbols.beta.paraproduct(u2).l2_norm() ** 2
    return SymmetrizedEnergy(energy=low + high, low=low, high=high, u1=u1, u2=u2, n0=n0)


def desk_norm_squared(f: SpectralField, n0: int, exclude_mean: bool = False) -> float:
    """||f||^2 + || |grad|^n0 f ||^2"""
    top = apply_radial_multiplier(f, lambda r: r ** n0, zero_value=0.0)
    return f.l2_norm(exclude_mean=exclude_mean) ** 2 + top.l2_norm() ** 2


def linear_energy(state: SurfaceState, n0: int = 8) -> float:
    """The energy at zero amplitude: desk norms of Lambda_tilde h and psi."""
    return desk_norm_squared(_lift(state.h), n0) + desk_norm_squared(state.psi, n0, exclude_mean=True)


def symmetrized_rhs(
    state: SurfaceState,
    symbols: SymmetrizationSymbols,
    good: GoodUnknown,
) -> Tuple[SpectralField, SpectralField]:
    """Principal part of (d_t U1, d_t U2)."""
    u1, u2 = good_variables(state, symbols, good)
    du1 = apply_radial_multiplier(u2, Lambda, zero_value=0.0) + symbols.gamma.paraproduct(u2) - transport(good.v, u1)
    du2 = -apply_radial_multiplier(u1, Lambda, zero_value=0.0) - symbols.gamma.paraproduct(u1) - transport(good.v, u2)
    return du1, du2


def energy_rate(
    state: SurfaceState,
    backend: Optional[DnoBackend] = None,
    n0: int = 8,
    amplitude_order: int = 2,
    step: float = 1e-4,
) -> float:
    """dE/dt along the full system, by a central difference in the direction of its rates."""
    rhs = WaterWaveRhs(backend=backend)
    dh, dpsi = rhs(state)
    solver = rhs.solver

    def energy_at(sign: float) -> float:
        moved = SurfaceState(h=state.h + dh * (sign * step), psi=state.psi + dpsi * (sign * step), time=state.time)
        return symmetrized_energy(moved, n0=n0, amplitude_order=amplitude_order, solver=solver).energy

    return (energy_at(1.0) - energy_at(-1.0)) / (2.0 * step)


class EnergyDriftSweep(BaseModel):
    amplitudes: List[float]
    energies: List[float]
    rates: List[float]
    comparability: List[float]
    fit: SlopeFit

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "amplitude": self.amplitudes,
                "energy": self.energies,
                "abs_energy_rate": self.rates,
                "relative_gap_to_linear_energy": self.comparability,
            }
        )


def energy_drift_sweep(
    h: SpectralField,
    psi: SpectralField,
    amplitudes: Sequence[float],
    backend: Optional[DnoBackend] = None,
    n0: int = 8,
    amplitude_order: int = 2,
) -> EnergyDriftSweep:
    """|dE/dt| and E against the linear energy at (eps h, eps psi)."""
    energies, rates, gaps = [], [], []
    for eps in amplitudes:
        state = SurfaceState(h=h * eps, psi=psi * eps)
        e = symmetrized_energy(state, backend, n0=n0, amplitude_order=amplitude_order).energy
        reference = linear_energy(state, n0)
        energies.append(e)
        gaps.append(abs(e - reference) / reference if reference > 0 else 0.0)
        rates.append(abs(energy_rate(state, backend, n0=n0, amplitude_order=amplitude_order)))
    fit = loglog_slope(amplitudes, rates)
    logger.info(
        "Energy drift sweep finished",
        extra_data={"slope": fit.slope, "max_relative_gap": float(np.max(gaps))},
    )
    return EnergyDriftSweep(
        amplitudes=list(amplitudes), energies=energies, rates=rates, comparability=gaps, fit=fit
    )
