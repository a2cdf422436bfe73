"""Linear flow e^{itLambda} and sup-norm decay probes."""

from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from dispersion.laws import Lambda, group_velocity
from spectral.dealias import refined_physical
from spectral.field import SpectralField
from spectral.grid import Grid2D
from spectral.littlewood_paley import lp_project
from utils.errors import ConeViolationError
from utils.fitting import SlopeFit, loglog_slope
from utils.logging import get_logger


logger = get_logger("dispersion.propagation")


def propagator_symbol(grid: Grid2D, t: float, direction: int = 1) -> np.ndarray:
    return np.exp(direction * 1j * t * Lambda(grid.radius))


def linear_propagate(f: SpectralField, t: float, direction: int = 1) -> SpectralField:
    """Multiply by exp(direction * i t Lambda(|xi|)); unitary in L^2."""
    if direction not in (1, -1):
        raise ValueError(f"direction must be +1 or -1, got {direction}")
    if t == 0:
        return f
    return SpectralField(
        grid=f.grid,
        coefficients=f.coefficients * propagator_symbol(f.grid, t, direction),
        is_real=False,
    )


def max_admissible_time(grid: Grid2D, k: int) -> float:
    """Largest t with Lambda'(2^k) t < L/4."""
    return grid.box_length / (4.0 * float(group_velocity(2.0 ** k)))


def check_cone(grid: Grid2D, k: int, t_max: float) -> None:
    limit = max_admissible_time(grid, k)
    if t_max >= limit:
        raise ConeViolationError(
            f"band {k} reaches the periodic images before t={t_max:g}; "
            f"max admissible time on L={grid.box_length:g} is {limit:.6g}",
            limit,
        )


def expected_decay_slope(k: int, theta: float = 1.0) -> float:
    """-1 for k >= 0, -(1 + theta)/2 below."""
    return -1.0 if k >= 0 else -(1.0 + theta) / 2.0


class DecayProbeResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    band: int
    theta: float
    times: List[float]
    sup_norms: List[float]
    fit: Optional[SlopeFit] = None
    expected_slope: float
    refine: int

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "t": self.times,
                "sup_norm": self.sup_norms,
                "band": [self.band] * len(self.times),
                "theta": [self.theta] * len(self.times),
            }
        )


def decay_probe(
    f: SpectralField,
    k: int,
    times: Sequence[float],
    theta: float = 1.0,
    refine: int = 2,
    fit_window: Optional[Tuple[float, float]] = None,
) -> DecayProbeResult:
    """sup_x |e^{itLambda} P_k f| at each time, plus a log-log slope over t > 0.

    Sup norms are taken on a grid ``refine`` times finer than the field's.
    """
    times = [float(t) for t in times]
    check_cone(f.grid, k, max(abs(t) for t in times))

    band = lp_project(f, k)
    base = band.coefficients
    radius = f.grid.radius
    sups = []
    for t in times:
        c = base * np.exp(1j * t * Lambda(radius))
        sups.append(float(np.max(np.abs(refined_physical(c, refine)))))

    lo, hi = fit_window if fit_window else (0.0, np.inf)
    window = [(t, s) for t, s in zip(times, sups) if t > 0 and lo <= t <= hi]
    fit = None
    if len(window) >= 2:
        fit = loglog_slope([t for t, _ in window], [s for _, s in window])

    logger.info(
        f"Decay probe band {k}: slope {fit.slope if fit else float('nan'):.4f}",
        extra_data={"band": k, "times": len(times), "refine": refine},
    )
    return DecayProbeResult(
        band=k,
        theta=theta,
        times=times,
        sup_norms=sups,
        fit=fit,
        expected_slope=expected_decay_slope(k, theta),
        refine=refine,
    )


# initial data

def gaussian_bump(grid: Grid2D, width: float, amplitude: float = 1.0) -> SpectralField:
    """amplitude * exp(-|x|^2 / (2 width^2)) centred at the origin."""
    r2 = grid.x ** 2 + grid.y ** 2
    return SpectralField.from_physical(grid, amplitude * np.exp(-r2 / (2.0 * width ** 2)))


def gaussian_ring(grid: Grid2D, center: float, width: float, amplitude: float = 1.0) -> SpectralField:
    """Radial field with Fourier profile amplitude * exp(-(|xi| - center)^2 / (2 width^2))."""
    c = amplitude * np.exp(-((grid.radius - center) ** 2) / (2.0 * width ** 2))
    c[grid.nyquist_mask] = 0.0
    return SpectralField.from_coefficients(grid, c, is_real=True)


def gaussian_packet(grid: Grid2D, center: Sequence[float], width: float, amplitude: float = 1.0) -> SpectralField:
    """Real packet amplitude * exp(-|x|^2/(2 width^2)) cos(xi_0 . x)."""
    r2 = grid.x ** 2 + grid.y ** 2
    carrier = np.cos(center[0] * grid.x + center[1] * grid.y)
    return SpectralField.from_physical(grid, amplitude * np.exp(-r2 / (2.0 * width ** 2)) * carrier)
