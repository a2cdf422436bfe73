"""Time stepping for d_t w = -i L(D) w + N(w) on a complex field.

Both schemes see the same split: a diagonal linear rate L(|xi|) and a
nonlinear map N. The water wave system is stepped in w = Lambda_tilde h + i psi
with L = Lambda; the toy Schrodinger model in v with L = |xi|^2.

RK4 treats the linear part explicitly and is guarded by dt max L <= pi/4.
The integrating factor scheme is the Lawson form of RK4 in the twisted
variable e^{itL} w, so the linear flow is exact and no step limit applies.
"""

from enum import Enum
from typing import Callable, Dict, Optional

import numpy as np

from dispersion.laws import Lambda
from evolution.rhs import WaterWaveRhs
from evolution.state import SurfaceState, from_linear_variable, linear_variable
from spectral.dealias import zero_nyquist
from spectral.field import SpectralField
from spectral.grid import Grid2D
from spectral.multipliers import RadialSymbol, sample_radial
from utils.errors import CflViolationError
from utils.logging import get_logger


CFL_LIMIT = np.pi / 4.0

Nonlinearity = Callable[[SpectralField], SpectralField]


class Scheme(str, Enum):
    RK4 = "rk4"
    INTEGRATING_FACTOR = "integrating_factor"


def max_rate(grid: Grid2D, rate: RadialSymbol = Lambda) -> float:
    values = np.abs(sample_radial(grid, rate, zero_value=0.0))
    return float(np.max(np.where(grid.nyquist_mask, 0.0, values)))


def check_cfl(grid: Grid2D, dt: float, rate: RadialSymbol = Lambda) -> float:
    """Returns dt * max rate; raises when it exceeds pi/4."""
    number = dt * max_rate(grid, rate)
    if number > CFL_LIMIT:
        limit = CFL_LIMIT / max_rate(grid, rate)
        raise CflViolationError(
            f"dt={dt:g} gives dt*max rate={number:.4f} > pi/4 on N={grid.n}; "
            f"use dt <= {limit:.4g} or the integrating factor scheme",
            {"dt": dt, "cfl_number": number, "max_dt": limit},
        )
    return number


class Integrator:
    """Common plumbing: linear rate sampled once, step counter, logger."""

    scheme: Scheme

    def __init__(
        self,
        grid: Grid2D,
        nonlinear: Nonlinearity,
        rate: RadialSymbol = Lambda,
        context: Optional[Dict] = None,
    ):
        self.grid = grid
        self.nonlinear = nonlinear
        self.rate_symbol = rate
        self.rate = np.real(sample_radial(grid, rate, zero_value=0.0))
        self.logger = get_logger(f"evolution.{self.scheme.value}", context)
        self.steps = 0
        self._dt: Optional[float] = None

    def setup(self, dt: float) -> None:
        self._dt = dt

    def _field(self, c: np.ndarray) -> SpectralField:
        return SpectralField(grid=self.grid, coefficients=zero_nyquist(c), is_real=False)

    def _n(self, c: np.ndarray) -> np.ndarray:
        return self.nonlinear(self._field(c)).coefficients

    def step(self, w: SpectralField, dt: float) -> SpectralField:
        if dt != self._dt:
            self.setup(dt)
        out = self._advance(np.asarray(w.coefficients), dt)
        self.steps += 1
        return self._field(out)

    def _advance(self, w: np.ndarray, dt: float) -> np.ndarray:
        raise NotImplementedError


class RungeKutta4(Integrator):
    scheme = Scheme.RK4

    def setup(self, dt: float) -> None:
        check_cfl(self.grid, dt, self.rate_symbol)
        super().setup(dt)

    def _rhs(self, w: np.ndarray) -> np.ndarray:
        return -1j * self.rate * w + self._n(w)

    def _advance(self, w: np.ndarray, dt: float) -> np.ndarray:
        k1 = self._rhs(w)
        k2 = self._rhs(w + 0.5 * dt * k1)
        k3 = self._rhs(w + 0.5 * dt * k2)
        k4 = self._rhs(w + dt * k3)
        return w + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


class IntegratingFactorRK4(Integrator):
    scheme = Scheme.INTEGRATING_FACTOR

    def setup(self, dt: float) -> None:
        super().setup(dt)
        self._half = np.exp(-0.5j * dt * self.rate)
        self._full = np.exp(-1j * dt * self.rate)

    def _advance(self, w: np.ndarray, dt: float) -> np.ndarray:
        half, full = self._half, self._full
        a = self._n(w)
        shifted = half * w
        b = self._n(shifted + 0.5 * dt * half * a)
        c = self._n(shifted + 0.5 * dt * b)
        d = self._n(full * w + dt * half * c)
        return full * w + dt / 6.0 * (full * a + 2.0 * half * (b + c) + d)


def make_integrator(
    scheme: Scheme,
    grid: Grid2D,
    nonlinear: Nonlinearity,
    rate: RadialSymbol = Lambda,
    context: Optional[Dict] = None,
) -> Integrator:
    cls = RungeKutta4 if Scheme(scheme) == Scheme.RK4 else IntegratingFactorRK4
    return cls(grid, nonlinear, rate, context)


class SurfaceStepper:
    """Steps SurfaceState through one WaterWaveRhs with one scheme."""

    def __init__(
        self,
        rhs: WaterWaveRhs,
        grid: Grid2D,
        scheme: Scheme = Scheme.INTEGRATING_FACTOR,
        context: Optional[Dict] = None,
    ):
        self.rhs = rhs
        self.integrator = make_integrator(scheme, grid, rhs.complex_nonlinear, Lambda, context)

    @property
    def scheme(self) -> Scheme:
        return self.integrator.scheme

    def step(self, state: SurfaceState, dt: float) -> SurfaceState:
        w = linear_variable(state.h, state.psi)
        h, psi = from_linear_variable(self.integrator.step(w, dt))
        return SurfaceState(h=h, psi=psi, time=state.time + dt)


def time_step(
    state: SurfaceState,
    dt: float,
    scheme: Scheme = Scheme.INTEGRATING_FACTOR,
    rhs: Optional[WaterWaveRhs] = None,
) -> SurfaceState:
    """One step of the full system (or of ``rhs`` when given)."""
    stepper = SurfaceStepper(rhs or WaterWaveRhs(), state.grid, scheme)
    return stepper.step(state, dt)
