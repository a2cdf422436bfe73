"""Quadratic Schrodinger toy model

    (d_t - i Lap) v = Q1(v, conj v) + Q2(v, v) + Q3(conj v, conj v)

and the low-frequency growth of its profile g = e^{-it Lap} v.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from evolution.bilinear import BilinearSymbol, SeparableTerm, apply_bilinear, radial
from evolution.integrators import IntegratingFactorRK4
from spectral.field import SpectralField
from spectral.grid import Grid2D
from spectral.littlewood_paley import smooth_step
from utils.fitting import SlopeFit, loglog_slope
from utils.logging import get_logger


logger = get_logger("evolution.toy_model")


def _rho(r: np.ndarray) -> np.ndarray:
    return r ** 2 / (1.0 + r ** 2)


def default_toy_symbol(name: str = "toy") -> BilinearSymbol:
    """(rho(|xi - eta|) + rho(|eta|)) / 2 with rho(r) = r^2 / (1 + r^2).

    Of size one when either input sits at frequency one and of size
    max(|xi - eta|, |eta|)^2 when both are low.
    """
    return BilinearSymbol(
        name=name,
        terms=[
            SeparableTerm(left=radial(_rho), coefficient=0.5),
            SeparableTerm(right=radial(_rho), coefficient=0.5),
        ],
        real=True,
    )


class ToySymbols(BaseModel):
    """Symbols of Q1 (v conj v), Q2 (v v) and Q3 (conj v conj v); None drops a term."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    q1: Optional[BilinearSymbol] = None
    q2: Optional[BilinearSymbol] = None
    q3: Optional[BilinearSymbol] = None

    @classmethod
    def default(cls, with_q1: bool = True) -> "ToySymbols":
        return cls(
            q1=default_toy_symbol("q1") if with_q1 else None,
            q2=default_toy_symbol("q2"),
            q3=default_toy_symbol("q3"),
        )


def toy_nonlinearity(v: SpectralField, symbols: ToySymbols) -> SpectralField:
    total = SpectralField.zeros(v.grid, is_real=False)
    v_bar = v.conj()
    for sym, (f, g) in ((symbols.q1, (v, v_bar)), (symbols.q2, (v, v)), (symbols.q3, (v_bar, v_bar))):
        if sym is not None:
            total = total + apply_bilinear(sym, f, g)
    return total


def toy_schrodinger_rhs(
    v: SpectralField,
    q1: Optional[BilinearSymbol] = None,
    q2: Optional[BilinearSymbol] = None,
    q3: Optional[BilinearSymbol] = None,
) -> SpectralField:
    """d_t v = i Lap v + Q1(v, conj v) + Q2(v, v) + Q3(conj v, conj v)"""
    lap = -(v.grid.radius ** 2) * v.coefficients
    dispersion = SpectralField(grid=v.grid, coefficients=1j * lap, is_real=False)
    return dispersion + toy_nonlinearity(v, ToySymbols(q1=q1, q2=q2, q3=q3))


def toy_profile(v: SpectralField, t: float) -> SpectralField:
    """g = e^{-it Lap} v"""
    phase = np.exp(1j * t * v.grid.radius ** 2)
    return SpectralField(grid=v.grid, coefficients=v.coefficients * phase, is_real=False)


def low_frequency_profile(g: SpectralField, t: float, center: float) -> float:
    """sup of |g^(xi)| over |xi| <= min(1/t, center/4)"""
    cap = center / 4.0 if t <= 0 else min(1.0 / t, center / 4.0)
    mask = g.grid.radius <= cap
    return float(np.max(np.abs(g.coefficients[mask])))


def toy_initial_data(
    grid: Grid2D,
    center: Sequence[float] = (1.0, 0.0),
    width: float = 0.3,
    peak: float = 0.01,
    background: float = 1e-5,
) -> SpectralField:
    """Gaussian packet in Fourier space around ``center``, removed below |center|/4.

    The zero mode carries ``background`` so the low-frequency functional is
    nonzero from the start.
    """
    c0 = np.asarray(center, dtype=float)
    distance2 = (grid.kx - c0[0]) ** 2 + (grid.ky - c0[1]) ** 2
    radius0 = float(np.hypot(*c0))
    cut = smooth_step((grid.radius - radius0 / 4.0) / (radius0 / 4.0))
    coefficients = peak * np.exp(-distance2 / (2.0 * width ** 2)) * cut
    coefficients[0, 0] = background
    coefficients[grid.nyquist_mask] = 0.0
    return SpectralField(grid=grid, coefficients=coefficients, is_real=False)


class ToyModelResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    times: List[float]
    low_frequency: List[float]
    fit: Optional[SlopeFit] = None
    fit_window: Tuple[float, float]
    with_q1: bool

    def growth_factor(self) -> float:
        """max over the window of F(t) / F(window start)"""
        lo, hi = self.fit_window
        window = [f for t, f in zip(self.times, self.low_frequency) if lo <= t <= hi]
        return max(window) / window[0]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"t": self.times, "low_frequency_profile": self.low_frequency})


def run_toy_model(
    v0: SpectralField,
    symbols: ToySymbols,
    dt: float,
    sample_times: Sequence[float],
    center: float = 1.0,
    fit_window: Tuple[float, float] = (1.0, 30.0),
) -> ToyModelResult:
    """Integrate with the integrating factor scheme and sample the low-frequency profile."""
    grid = v0.grid
    integrator = IntegratingFactorRK4(
        grid,
        lambda v: toy_nonlinearity(v, symbols),
        rate=lambda r: r ** 2,
        context={"model": "toy_schrodinger", "n": grid.n},
    )
    samples = sorted(float(t) for t in sample_times)
    times, values = [], []
    v, t = v0, 0.0
    for target in samples:
        while t < target - 0.5 * dt:
            v = integrator.step(v, dt)
            t += dt
        times.append(target)
        values.append(low_frequency_profile(toy_profile(v, t), target, center))

    lo, hi = fit_window
    window = [(s, f) for s, f in zip(times, values) if lo <= s <= hi and s > 0]
    fit = loglog_slope([s for s, _ in window], [f for _, f in window]) if len(window) >= 2 else None
    logger.info(
        f"Toy model run finished at t={t:g}",
        extra_data={"with_q1": symbols.q1 is not None, "slope": fit.slope if fit else None, "steps": integrator.steps},
    )
    return ToyModelResult(
        times=times,
        low_frequency=values,
        fit=fit,
        fit_window=fit_window,
        with_q1=symbols.q1 is not None,
    )
