"""Dyadic cutoffs, Littlewood-Paley projections and spatial localizers.

The base bump is 1 on [0, 5/4], 0 beyond 3/2, with a C-infinity rise built
from the standard transition exp(-1/t) / (exp(-1/t) + exp(-1/(1-t))).
"""

import math
from typing import Tuple

import numpy as np

from spectral.field import SpectralField
from spectral.grid import Grid2D
from utils.errors import ConfigurationError
from utils.logging import get_logger


logger = get_logger("spectral.littlewood_paley")

PLATEAU = 1.25
SUPPORT = 1.5
# theta transition window in log2(|a| / |b|)
THETA_LOW = -10.0
THETA_HIGH = 2.0


def smooth_step(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    out[t >= 1.0] = 1.0
    inside = (t > 0.0) & (t < 1.0)
    ti = t[inside]
    a = np.exp(-1.0 / ti)
    b = np.exp(-1.0 / (1.0 - ti))
    out[inside] = a / (a + b)
    return out


def bump(s) -> np.ndarray:
    """Even profile: 1 for |s| <= 5/4, 0 for |s| >= 3/2."""
    s = np.abs(np.asarray(s, dtype=float))
    return 1.0 - smooth_step((s - PLATEAU) / (SUPPORT - PLATEAU))


def psi_le(k: float, x) -> np.ndarray:
    return bump(np.asarray(x, dtype=float) / 2.0 ** k)


def psi_k(k: float, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return bump(x / 2.0 ** k) - bump(x / 2.0 ** (k - 1))


def psi_ge(k: float, x) -> np.ndarray:
    return 1.0 - psi_le(k - 1, x)


def psi_range(k_lo: float, k_hi: float, x) -> np.ndarray:
    """Multiplier of P_[k_lo, k_hi]."""
    return psi_le(k_hi, x) - psi_le(k_lo - 1, x)


def dyadic_range(grid: Grid2D) -> Tuple[int, int]:
    """Bands [k_min, k_max] whose cutoffs, plus the residual low band, cover the lattice.

    k_max is the smallest k whose plateau reaches the lattice corner, so the
    partition of unity holds at every lattice radius; below k_min only the
    zero mode survives.
    """
    k_min = math.ceil(math.log2(grid.dk)) - 2
    corner = math.sqrt(2.0) * grid.nyquist
    k_max = math.ceil(math.log2(corner / PLATEAU))
    return k_min, k_max


def band_candidates(radius: float) -> Tuple[int, int]:
    """The (at most two) bands that can carry a given radius."""
    base = math.floor(math.log2(radius))
    return base, base + 1


def lp_multiplier(grid: Grid2D, k: int) -> np.ndarray:
    return psi_k(k, grid.radius)


def lp_project(f: SpectralField, k: int) -> SpectralField:
    k_min, k_max = dyadic_range(f.grid)
    if k < k_min or k > k_max:
        logger.warning(
            f"Band {k} outside representable range [{k_min}, {k_max}], returning zero",
            extra_data={"band": k, "k_min": k_min, "k_max": k_max},
        )
        return SpectralField.zeros(f.grid, f.is_real)
    return f.with_coefficients(f.coefficients * lp_multiplier(f.grid, k))


def lp_project_range(f: SpectralField, k_lo: int, k_hi: int) -> SpectralField:
    return f.with_coefficients(f.coefficients * psi_range(k_lo, k_hi, f.grid.radius))


def residual_low_band(f: SpectralField) -> SpectralField:
    k_min, _ = dyadic_range(f.grid)
    return f.with_coefficients(f.coefficients * psi_le(k_min - 1, f.grid.radius))


def theta_ratio(a_norm, b_norm) -> np.ndarray:
    """theta as a function of the two magnitudes; 0 whenever |b| = 0."""
    a_norm = np.asarray(a_norm, dtype=float)
    b_norm = np.asarray(b_norm, dtype=float)
    a_b = np.broadcast_arrays(a_norm, b_norm)
    a_norm, b_norm = a_b[0], a_b[1]
    out = np.zeros(a_norm.shape, dtype=float)
    live = b_norm > 0.0
    with np.errstate(divide="ignore"):
        rho = np.log2(a_norm[live] / b_norm[live])
    out[live] = 1.0 - smooth_step((rho - THETA_LOW) / (THETA_HIGH - THETA_LOW))
    return out


def theta_cutoff(xi_minus_eta, eta) -> np.ndarray:
    """Low-high cutoff: 1 when |xi - eta| <= 2^-10 |eta|, 0 when |xi - eta| >= 2^10 |eta|.

    Accepts wavevectors (last axis of length 2) for both arguments.
    """
    a = np.linalg.norm(np.asarray(xi_minus_eta, dtype=float), axis=-1)
    b = np.linalg.norm(np.asarray(eta, dtype=float), axis=-1)
    return theta_ratio(a, b)


def theta_tilde(eta, xi_minus_eta) -> np.ndarray:
    """Comparable-frequency weight 1 - theta(eta, xi-eta) - theta(xi-eta, eta)."""
    a = np.linalg.norm(np.asarray(eta, dtype=float), axis=-1)
    b = np.linalg.norm(np.asarray(xi_minus_eta, dtype=float), axis=-1)
    return 1.0 - theta_ratio(a, b) - theta_ratio(b, a)


# spatial localization

def j_range(grid: Grid2D, k: int) -> Tuple[int, int]:
    j0 = max(-k, 0)
    j_max = max(math.ceil(math.log2(grid.box_length)) + 2, j0)
    return j0, j_max


def spatial_localizer(grid: Grid2D, k: int, j: int) -> np.ndarray:
    """phi_j^k(|x|) on the box-centred coordinate."""
    j0, _ = j_range(grid, k)
    if j < j0:
        raise ConfigurationError(
            f"spatial localizer index j={j} below admissible minimum {j0} for band {k}",
            {"k": k, "j": j, "j_min": j0},
        )
    r = grid.physical_radius()
    if j == j0:
        return psi_le(j0, r)
    return psi_k(j, r)


def spatial_localize(f: SpectralField, k: int, j: int) -> SpectralField:
    phi = spatial_localizer(f.grid, k, j)
    band = lp_project(f, k)
    localized = SpectralField.from_physical(f.grid, phi * band.physical(), is_real=f.is_real)
    return lp_project_range(localized, k - 2, k + 2)
