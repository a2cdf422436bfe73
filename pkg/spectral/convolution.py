"""Symbol-weighted lattice convolutions (dense path).

For inputs a_0, ..., a_{m-1} and a weight w this evaluates

    out(xi) = sum a_0(w_0) a_1(w_1) ... a_{m-1}(w_{m-1}) w(w_0, ..., w_{m-1}),
    w_0 + ... + w_{m-1} = xi,

over lattice points with the Nyquist row removed. With the coefficient
normalisation of SpectralField this is the discrete form of
(2 pi)^-2 \\int f(xi - eta) g(eta) m(xi - eta, eta) d eta, and for w = 1 it
agrees with the dealiased pseudo-spectral product. Cost grows like
N^(2m), hence the size ceilings.
"""

import itertools
from typing import Callable, Sequence

import numpy as np

from spectral.dealias import zero_nyquist
from spectral.grid import Grid2D
from utils.errors import SizeLimitError


DENSE_LIMITS = {2: 64, 3: 16, 4: 8}

# weight(first_arguments, *fixed_arguments) -> array over the first argument;
# first_arguments has shape (n, n, 2), each fixed argument shape (2,)
Weight = Callable[..., np.ndarray]


def check_dense_size(grid: Grid2D, arity: int, limits: dict = None) -> None:
    limits = limits or DENSE_LIMITS
    ceiling = limits.get(arity)
    if ceiling is None or grid.n > ceiling:
        raise SizeLimitError(
            f"dense {arity}-linear path refused at N={grid.n} (limit {ceiling}); "
            f"use a separable symbol or reduce n_points_per_axis",
            {"arity": arity, "n": grid.n, "limit": ceiling},
        )


def shifted_lattice(grid: Grid2D) -> np.ndarray:
    """Wavevectors in fftshift order, shape (n, n, 2)."""
    kx = np.fft.fftshift(grid.kx)
    ky = np.fft.fftshift(grid.ky)
    return np.stack([kx, ky], axis=-1)


def _shift_add(out: np.ndarray, src: np.ndarray, shift: tuple) -> None:
    """out[i + s] += src[i] wherever both indices are on the lattice."""
    n = out.shape[0]
    dst_slices, src_slices = [], []
    for s in shift:
        if s >= 0:
            dst_slices.append(slice(s, n))
            src_slices.append(slice(0, n - s))
        else:
            dst_slices.append(slice(0, n + s))
            src_slices.append(slice(-s, n))
    out[tuple(dst_slices)] += src[tuple(src_slices)]


def dense_multilinear(
    grid: Grid2D,
    weight: Weight,
    inputs: Sequence[np.ndarray],
    limits: dict = None,
    tolerance: float = 0.0,
) -> np.ndarray:
    """Evaluate the weighted convolution; returns coefficients in FFT order.

    Entries of inputs 1..m-1 with modulus <= tolerance are skipped.
    """
    arity = len(inputs)
    check_dense_size(grid, arity, limits)
    n = grid.n
    half = n // 2

    shifted = [np.fft.fftshift(zero_nyquist(c)) for c in inputs]
    lattice = shifted_lattice(grid)
    out = np.zeros((n, n), dtype=complex)

    supports = []
    for c in shifted[1:]:
        idx = np.argwhere(np.abs(c) > tolerance)
        supports.append([tuple(i) for i in idx])

    for combo in itertools.product(*supports):
        coefficient = 1.0 + 0.0j
        fixed_vectors = []
        offset = [0, 0]
        for c, index in zip(shifted[1:], combo):
            coefficient *= c[index]
            fixed_vectors.append(lattice[index])
            offset[0] += index[0] - half
            offset[1] += index[1] - half
        if abs(offset[0]) >= n or abs(offset[1]) >= n:
            continue
        w = weight(lattice, *fixed_vectors)
        _shift_add(out, shifted[0] * w * coefficient, (offset[0], offset[1]))

    return zero_nyquist(np.fft.ifftshift(out))


def dense_bilinear(grid: Grid2D, weight: Weight, f: np.ndarray, g: np.ndarray, limits: dict = None) -> np.ndarray:
    return dense_multilinear(grid, weight, [f, g], limits)


def unit_weight(first: np.ndarray, *fixed: np.ndarray) -> np.ndarray:
    return np.ones(first.shape[:-1])
