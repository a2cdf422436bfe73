"""Bilinear Fourier multipliers Q(f, g) with symbol m(xi - eta, eta).

    F[Q(f, g)](xi) = sum_eta f^(xi - eta) g^(eta) m(xi - eta, eta)

A symbol is either separable, a sum of out(xi) l(xi - eta) r(eta) terms
evaluated through dealiased physical-space products, or dense, sampled
pointwise and evaluated by direct lattice convolution (small grids only).
"""

from enum import Enum
from typing import Callable, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from spectral.convolution import check_dense_size, dense_bilinear
from spectral.dealias import physical_eval, zero_nyquist
from spectral.field import SpectralField
from spectral.grid import Grid2D


# wavevectors (..., 2) -> values (...)
VectorSymbol = Callable[[np.ndarray], np.ndarray]
# (xi - eta, eta) -> values, broadcasting over leading axes
PairSymbol = Callable[[np.ndarray, np.ndarray], np.ndarray]


class SymbolPath(str, Enum):
    SEPARABLE = "separable"
    DENSE = "dense"


def radial(fn: Callable[[np.ndarray], np.ndarray]) -> VectorSymbol:
    """Lift a function of |v| to a function of the wavevector v."""

    def symbol(v: np.ndarray) -> np.ndarray:
        return fn(np.linalg.norm(np.asarray(v, dtype=float), axis=-1))

    return symbol


def _ones(v: np.ndarray) -> np.ndarray:
    return np.ones(np.shape(v)[:-1])


def lattice_vectors(grid: Grid2D) -> np.ndarray:
    """Wavevectors in FFT order, shape (n, n, 2)."""
    return np.stack([grid.kx, grid.ky], axis=-1)


class SeparableTerm(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    left: Optional[VectorSymbol] = None
    right: Optional[VectorSymbol] = None
    output: Optional[VectorSymbol] = None
    coefficient: complex = 1.0

    def evaluate(self, xi_minus_eta: np.ndarray, eta: np.ndarray) -> np.ndarray:
        left = self.left or _ones
        right = self.right or _ones
        output = self.output or _ones
        return self.coefficient * output(xi_minus_eta + eta) * left(xi_minus_eta) * right(eta)


class BilinearSymbol(BaseModel):
    """m(xi - eta, eta) as separable terms or as a dense pointwise function.

    ``real`` marks symbols with conj(m(-a, -b)) = m(a, b), which map real
    inputs to real outputs.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = "symbol"
    terms: List[SeparableTerm] = []
    dense: Optional[PairSymbol] = None
    real: bool = False

    @model_validator(mode="after")
    def check_one_form(self) -> "BilinearSymbol":
        if bool(self.terms) == (self.dense is not None):
            raise ValueError("a bilinear symbol is either separable (terms) or dense, not both or neither")
        return self

    @property
    def path(self) -> SymbolPath:
        return SymbolPath.SEPARABLE if self.terms else SymbolPath.DENSE

    @classmethod
    def constant(cls, value: complex = 1.0, name: str = "constant") -> "BilinearSymbol":
        return cls(name=name, terms=[SeparableTerm(coefficient=value)], real=bool(np.isreal(value)))

    @classmethod
    def from_function(cls, fn: PairSymbol, name: str = "dense", real: bool = False) -> "BilinearSymbol":
        return cls(name=name, dense=fn, real=real)

    def evaluate(self, xi_minus_eta, eta) -> np.ndarray:
        a = np.asarray(xi_minus_eta, dtype=float)
        b = np.asarray(eta, dtype=float)
        if self.dense is not None:
            return np.asarray(self.dense(a, b))
        return sum(term.evaluate(a, b) for term in self.terms)

    def lattice_samples(self, grid: Grid2D) -> np.ndarray:
        """m on all (xi - eta, eta) lattice pairs, shape (n, n, n, n).

        Pairs whose sum leaves the lattice or lands on the Nyquist row are
        zero, so the array is the exact symbol of the discrete operator.
        """
        n = grid.n
        k = lattice_vectors(grid)
        values = self.evaluate(k[:, :, None, None, :], k[None, None, :, :, :])
        m = np.fft.fftfreq(n, d=1.0 / n).astype(int)
        half = n // 2
        ok = np.abs(m) < half
        sums = m[:, None] + m[None, :]
        valid_1d = ok[:, None] & ok[None, :] & (np.abs(sums) < half)
        valid = valid_1d[:, None, :, None] & valid_1d[None, :, None, :]
        return np.where(valid, values, 0.0)


def _separable(sym: BilinearSymbol, f: SpectralField, g: SpectralField) -> np.ndarray:
    grid = f.grid
    k = lattice_vectors(grid)
    out = np.zeros(grid.shape, dtype=complex)
    for term in sym.terms:
        left = f.coefficients * (term.left(k) if term.left else 1.0)
        right = g.coefficients * (term.right(k) if term.right else 1.0)
        product = physical_eval(grid, np.multiply, left, right, real=False)
        out += term.coefficient * (term.output(k) if term.output else 1.0) * product
    return zero_nyquist(out)


def _dense(sym: BilinearSymbol, f: SpectralField, g: SpectralField, limits: Optional[dict]) -> np.ndarray:
    def weight(first: np.ndarray, eta: np.ndarray) -> np.ndarray:
        return sym.evaluate(first, np.broadcast_to(eta, first.shape))

    return dense_bilinear(f.grid, weight, f.coefficients, g.coefficients, limits)


def apply_bilinear(
    sym: BilinearSymbol,
    f: SpectralField,
    g: SpectralField,
    path: Optional[SymbolPath] = None,
    limits: Optional[dict] = None,
) -> SpectralField:
    """Q(f, g); ``path`` forces the dense evaluation of a separable symbol."""
    if not f.grid.same_as(g.grid):
        raise ValueError("bilinear operands live on different grids")
    path = SymbolPath(path) if path is not None else sym.path
    if path == SymbolPath.SEPARABLE:
        if sym.path != SymbolPath.SEPARABLE:
            raise ValueError(f"symbol {sym.name!r} has no separable form")
        c = _separable(sym, f, g)
    else:
        check_dense_size(f.grid, 2, limits)
        c = _dense(sym, f, g, limits)
    is_real = sym.real and f.is_real and g.is_real
    return SpectralField.from_coefficients(f.grid, c, is_real=is_real)
