"""Least-squares slope fits in log-log coordinates."""

from typing import Sequence

import numpy as np
from pydantic import BaseModel


class SlopeFit(BaseModel):
    slope: float
    intercept: float
    r_squared: float
    window: tuple[float, float]
    n_points: int

    def within(self, target: float, tolerance: float) -> bool:
        return abs(self.slope - target) <= tolerance


def loglog_slope(x: Sequence[float], y: Sequence[float]) -> SlopeFit:
    """Fit log|y| = slope * log x + intercept.

    Points with non-positive x or y are dropped; at least two must remain.
    """
    xs = np.asarray(x, dtype=float)
    ys = np.abs(np.asarray(y, dtype=float))
    keep = (xs > 0) & (ys > 0) & np.isfinite(ys)
    xs, ys = xs[keep], ys[keep]
    if xs.size < 2:
        raise ValueError("loglog_slope needs at least two positive samples")

    lx, ly = np.log(xs), np.log(ys)
    slope, intercept = np.polyfit(lx, ly, 1)
    residual = ly - (slope * lx + intercept)
    spread = np.sum((ly - ly.mean()) ** 2)
    r_squared = 1.0 - float(np.sum(residual ** 2) / spread) if spread > 0 else 1.0

    return SlopeFit(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r_squared,
        window=(float(xs.min()), float(xs.max())),
        n_points=int(xs.size),
    )
