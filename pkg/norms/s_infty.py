"""S-infinity estimates of multilinear symbols.

The S-infinity norm of m is the L^1 norm of its inverse Fourier transform.
On a band-restricted sample the symbol is multiplied by psi_{k_j}(|w_j|) for
every input and read on the frequency lattice of spacing
SPACING_FACTOR * 2^{k_j} per input. That lattice is fixed, so the inverse
DFT is always the same trigonometric kernel, periodic with period
2 pi / spacing; the number of samples only sets how finely it is read in
physical space. The l^1 sum is a Riemann sum of that kernel's L^1 norm on
one period and converges as the sample count grows.
"""

from typing import Callable, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from evolution.bilinear import BilinearSymbol, apply_bilinear
from spectral.field import SpectralField
from spectral.grid import Grid2D
from spectral.littlewood_paley import SUPPORT, psi_k
from utils.errors import NonFiniteMultiplierError, ResolutionError, SizeLimitError
from utils.logging import get_logger


logger = get_logger("norms.s_infty")

SPACING_FACTOR = 0.25
MIN_SAMPLES_ACROSS_BAND = 8
MAX_SAMPLE_POINTS = 2 ** 24
LATTICE_LIMIT = 32

# symbol(w_0, ..., w_{m-1}) -> values; each w_j is an array with last axis 2
MultilinearSymbol = Callable[..., np.ndarray]


class SInftyEstimate(BaseModel):
    bands: List[int]
    output_band: Optional[int] = None
    samples: int
    spacing_factor: float
    estimate: float
    derivative_bound: float
    sup: float

    def constant(self, scale: float) -> float:
        """estimate / scale, the constant in a bound of the form C * scale"""
        return self.estimate / scale if scale > 0 else float("inf")


def samples_across_band(spacing_factor: float = SPACING_FACTOR) -> float:
    """Lattice points across the band support of diameter 2 * SUPPORT * 2^k."""
    return 2.0 * SUPPORT / spacing_factor


def box_reach(samples: int, spacing_factor: float = SPACING_FACTOR) -> float:
    """Largest |coordinate| / 2^k on both sides of the centred axis."""
    return (samples // 2 - 1) * spacing_factor


def check_resolution(bands: Sequence[int], samples: int, spacing_factor: float = SPACING_FACTOR) -> None:
    across = samples_across_band(spacing_factor)
    if across < MIN_SAMPLES_ACROSS_BAND:
        raise ResolutionError(
            f"lattice spacing {spacing_factor:g} * 2^k gives {across:.1f} points across each band, "
            f"at least {MIN_SAMPLES_ACROSS_BAND} are needed",
            {"spacing_factor": spacing_factor, "across": across, "minimum": MIN_SAMPLES_ACROSS_BAND},
        )
    reach = box_reach(samples, spacing_factor)
    if reach < SUPPORT:
        raise ResolutionError(
            f"{samples} samples per axis reach {reach:g} * 2^k, the band extends to {SUPPORT:g} * 2^k",
            {"samples": samples, "reach": reach, "support": SUPPORT},
        )
    total = samples ** (2 * len(bands))
    if total > MAX_SAMPLE_POINTS:
        raise SizeLimitError(
            f"band sample of {len(bands)} inputs at {samples} points per axis has {total} points "
            f"(limit {MAX_SAMPLE_POINTS})",
            {"arity": len(bands), "n": samples, "limit": MAX_SAMPLE_POINTS},
        )


def band_axis(k: int, samples: int, spacing_factor: float = SPACING_FACTOR) -> np.ndarray:
    return (np.arange(samples) - samples // 2) * (spacing_factor * 2.0 ** k)


def band_window(k: int, samples: int, spacing_factor: float = SPACING_FACTOR) -> slice:
    """Indices of band_axis inside [-SUPPORT * 2^k, SUPPORT * 2^k]."""
    live = np.flatnonzero(np.abs(band_axis(k, samples, spacing_factor)) <= SUPPORT * 2.0 ** k)
    return slice(int(live[0]), int(live[-1]) + 1)


def band_inputs(bands: Sequence[int], samples: int, spacing_factor: float = SPACING_FACTOR) -> List[np.ndarray]:
    """One wavevector array per input, laid out on its own pair of axes.

    Only the window covering the band support is laid out.
    """
    m = len(bands)
    inputs = []
    for j, k in enumerate(bands):
        a = band_axis(k, samples, spacing_factor)[band_window(k, samples, spacing_factor)]
        plane = np.stack(np.meshgrid(a, a, indexing="ij"), axis=-1)
        shape = [1] * (2 * m) + [2]
        shape[2 * j] = a.size
        shape[2 * j + 1] = a.size
        inputs.append(plane.reshape(shape))
    return inputs


def sample_band_symbol(
    fn: MultilinearSymbol,
    bands: Sequence[int],
    samples: int,
    output_band: Optional[int] = None,
    spacing_factor: float = SPACING_FACTOR,
) -> np.ndarray:
    """fn times prod_j psi_{k_j}(|w_j|) (and psi_k(|sum w|)) on the band grids.

    fn is called only on the window around the band support, one slab of the
    first input axis at a time. Samples where the cutoff vanishes are exact
    zeros whatever fn returns there.
    """
    check_resolution(bands, samples, spacing_factor)
    m = len(bands)
    inputs = band_inputs(bands, samples, spacing_factor)
    window = tuple(w for k in bands for w in (band_window(k, samples, spacing_factor),) * 2)
    offset = tuple(w.start for w in window)
    block = tuple(w.stop - w.start for w in window)
    values = np.zeros(block, dtype=complex)
    for i in range(block[0]):
        slab = [inputs[0][i : i + 1]] + inputs[1:]
        weight = np.ones((1,) + block[1:])
        for k, w in zip(bands, slab):
            weight = weight * psi_k(k, np.linalg.norm(w, axis=-1))
        if output_band is not None:
            total = sum(slab)
            weight = weight * psi_k(output_band, np.linalg.norm(total, axis=-1))
        with np.errstate(all="ignore"):
            raw = np.broadcast_to(np.asarray(fn(*slab), dtype=complex), weight.shape)
        live = weight != 0.0
        bad = live & ~np.isfinite(raw)
        if bad.any():
            local = (i,) + tuple(int(v) for v in np.argwhere(bad)[0][1:])
            index = tuple(o + v for o, v in zip(offset, local))
            raise NonFiniteMultiplierError(f"symbol is not finite on band sample {index}", index)
        values[i : i + 1] = np.where(live, raw * np.where(live, weight, 0.0), 0.0)
    out = np.zeros((samples,) * (2 * m), dtype=complex)
    out[window] = values
    return out


def _derivative_bound(values: np.ndarray, bands: Sequence[int], spacing_factor: float) -> float:
    """sup|f| + sum_j sum_{order 1, 2} 2^{order k_j} sup|d^order_{w_j} f|"""
    bound = float(np.max(np.abs(values)))
    for j, k in enumerate(bands):
        spacing = spacing_factor * 2.0 ** k
        for axis in (2 * j, 2 * j + 1):
            first = np.gradient(values, spacing, axis=axis)
            second = np.gradient(first, spacing, axis=axis)
            bound += 2.0 ** k * float(np.max(np.abs(first))) + 4.0 ** k * float(np.max(np.abs(second)))
    return bound


def s_infty_estimate(
    fn: MultilinearSymbol,
    bands: Sequence[int],
    samples: int = 32,
    output_band: Optional[int] = None,
    spacing_factor: float = SPACING_FACTOR,
    with_derivatives: bool = True,
) -> SInftyEstimate:
    """l^1 norm of the inverse DFT of the band-restricted symbol.

    ``fn`` takes one wavevector per input; a BilinearSymbol's ``evaluate``
    fits directly. The derivative-based bound is reported for cross-checks.
    """
    values = sample_band_symbol(fn, bands, samples, output_band, spacing_factor)
    estimate = float(np.sum(np.abs(np.fft.ifftn(values))))
    derivative = _derivative_bound(values, bands, spacing_factor) if with_derivatives else float("nan")
    result = SInftyEstimate(
        bands=list(bands),
        output_band=output_band,
        samples=samples,
        spacing_factor=spacing_factor,
        estimate=estimate,
        derivative_bound=derivative,
        sup=float(np.max(np.abs(values))),
    )
    logger.debug("S-infinity estimate", extra_data=result.model_dump())
    return result


def lattice_s_infty(sym: BilinearSymbol, grid: Grid2D) -> float:
    """l^1 norm of the kernel of the discrete bilinear operator on ``grid``."""
    if grid.n > LATTICE_LIMIT:
        raise SizeLimitError(
            f"lattice S-infinity refused at N={grid.n} (limit {LATTICE_LIMIT})",
            {"arity": 2, "n": grid.n, "limit": LATTICE_LIMIT},
        )
    return float(np.sum(np.abs(np.fft.ifftn(sym.lattice_samples(grid)))))


class YoungCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    trials: int
    violations: int
    worst_ratio: float

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _random_field(grid: Grid2D, rng: np.random.Generator) -> SpectralField:
    values = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    f = SpectralField.from_physical(grid, values, is_real=False)
    c = np.array(f.coefficients)
    c[grid.nyquist_mask] = 0.0
    return f.with_coefficients(c)


def young_check(
    symbols: Sequence[BilinearSymbol], grid: Grid2D, trials: int = 100, seed: int = 0
) -> YoungCheck:
    """||Q(f, g)||_2 <= S(m) ||f||_2 ||g||_inf on random complex fields.

    The inequality is exact for the lattice operator, so any violation
    beyond rounding is a defect of the bilinear path.
    """
    rng = np.random.default_rng(seed)
    bounds = [lattice_s_infty(s, grid) for s in symbols]
    violations, worst = 0, 0.0
    for t in range(trials):
        index = t % len(symbols)
        f, g = _random_field(grid, rng), _random_field(grid, rng)
        lhs = apply_bilinear(symbols[index], f, g, path="dense").l2_norm()
        rhs = bounds[index] * f.l2_norm() * g.sup_norm()
        ratio = lhs / rhs if rhs > 0 else 0.0
        if not np.isfinite(ratio):
            ratio = float("inf")
        worst = max(worst, ratio)
        if ratio > 1.0 + 1e-10:
            violations += 1
    if violations:
        logger.warning(
            "Young inequality violated on the lattice",
            extra_data={"violations": violations, "trials": trials, "worst_ratio": worst},
        )
    return YoungCheck(trials=trials, violations=violations, worst_ratio=worst)
