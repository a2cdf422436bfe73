"""Dyadic weighted norms of profiles.

    ||f||_W^{gamma,b} = sum_k (2^{gamma k} + 2^{b k}) ||P_k f||_inf
    ||g||_B_{k,j}     = (2^{(1+alpha) k} + 2^{10 k_+}) 2^j ||phi_j^k P_k g||_2
    ||g||_Z1          = sum_k sum_j ||g||_B_{k,j}

The infinite sums run over the bands the grid can represent and over
j <= log2(box_length) + 2; every report states the ranges it used.
"""

from typing import Dict, List, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel

from spectral.field import SpectralField
from spectral.littlewood_paley import dyadic_range, j_range, lp_project, spatial_localizer
from utils.errors import ConfigurationError
from utils.logging import get_logger


logger = get_logger("norms.weighted")

ALPHA = 0.1
HIGH_WEIGHT = 10.0


def w_norm(f: SpectralField, gamma: float, b: float) -> float:
    if b >= gamma:
        raise ConfigurationError(
            f"W norm needs b < gamma, got gamma={gamma}, b={b}", {"gamma": gamma, "b": b}
        )
    k_min, k_max = dyadic_range(f.grid)
    total = 0.0
    for k in range(k_min, k_max + 1):
        total += (2.0 ** (gamma * k) + 2.0 ** (b * k)) * lp_project(f, k).sup_norm()
    return total


class BandValue(BaseModel):
    k: int
    j: int
    value: float


class NormReport(BaseModel):
    name: str
    total: float
    bands: List[BandValue]
    k_range: Tuple[int, int]
    j_ranges: Dict[int, Tuple[int, int]]
    constants: Dict[str, float]
    warnings: List[str] = []

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([b.model_dump() for b in self.bands], columns=["k", "j", "value"])

    def band_total(self, k: int) -> float:
        return float(sum(b.value for b in self.bands if b.k == k))


def band_weight(k: int, alpha: float = ALPHA, high_weight: float = HIGH_WEIGHT) -> float:
    return 2.0 ** ((1.0 + alpha) * k) + 2.0 ** (high_weight * max(k, 0))


def _report(g: SpectralField, values: List[BandValue], alpha: float, high_weight: float) -> NormReport:
    k_min, k_max = dyadic_range(g.grid)
    return NormReport(
        name="Z1",
        total=float(sum(v.value for v in values)),
        bands=values,
        k_range=(k_min, k_max),
        j_ranges={k: j_range(g.grid, k) for k in range(k_min, k_max + 1)},
        constants={"alpha": alpha, "high_weight": high_weight},
    )


def z1_norm(g: SpectralField, alpha: float = ALPHA, high_weight: float = HIGH_WEIGHT) -> NormReport:
    """B_{k,j} table and its sum; one band projection is shared by every j."""
    grid = g.grid
    k_min, k_max = dyadic_range(grid)
    area = grid.dx ** 2
    values = []
    for k in range(k_min, k_max + 1):
        band = lp_project(g, k).physical()
        weight = band_weight(k, alpha, high_weight)
        j0, j1 = j_range(grid, k)
        for j in range(j0, j1 + 1):
            local = spatial_localizer(grid, k, j) * band
            norm = float(np.sqrt(np.sum(np.abs(local) ** 2) * area))
            values.append(BandValue(k=k, j=j, value=weight * 2.0 ** j * norm))
    report = _report(g, values, alpha, high_weight)
    logger.debug("Z1 norm", extra_data={"total": report.total, "k_range": report.k_range})
    return report


def z1_norm_direct(g: SpectralField, alpha: float = ALPHA, high_weight: float = HIGH_WEIGHT) -> NormReport:
    """Brute-force reference: a fresh projection and spectral L^2 norm per (k, j)."""
    grid = g.grid
    k_min, k_max = dyadic_range(grid)
    values = []
    for k in range(k_min, k_max + 1):
        j0, j1 = j_range(grid, k)
        for j in range(j0, j1 + 1):
            band = lp_project(g, k)
            local = SpectralField.from_physical(grid, spatial_localizer(grid, k, j) * band.physical(), is_real=g.is_real)
            values.append(BandValue(k=k, j=j, value=band_weight(k, alpha, high_weight) * 2.0 ** j * local.l2_norm()))
    return _report(g, values, alpha, high_weight)
