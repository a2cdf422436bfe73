from typing import Optional, Union

import numpy as np
import scipy.fft
from pydantic import BaseModel, ConfigDict, field_validator

from spectral.grid import Grid2D


Number = Union[int, float, complex]


def reflect(coefficients: np.ndarray) -> np.ndarray:
    """Return c(-xi) on the last two axes (FFT ordering)."""
    flipped = np.flip(coefficients, axis=(-2, -1))
    return np.roll(flipped, shift=(1, 1), axis=(-2, -1))


def to_coefficients(values: np.ndarray) -> np.ndarray:
    n = values.shape[-1]
    return scipy.fft.fft2(values, axes=(-2, -1)) / (n * n)


def to_physical(coefficients: np.ndarray, real: bool = False) -> np.ndarray:
    n = coefficients.shape[-1]
    values = scipy.fft.ifft2(coefficients, axes=(-2, -1)) * (n * n)
    return values.real if real else values


class SpectralField(BaseModel):
    """Immutable field on a periodic grid, stored as Fourier coefficients."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: Grid2D
    coefficients: np.ndarray
    is_real: bool = True

    @field_validator("coefficients", mode="before")
    @classmethod
    def validate_coefficients(cls, v) -> np.ndarray:
        v = np.array(v, dtype=complex)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"coefficients must be a square 2D array, got shape {v.shape}")
        v.setflags(write=False)
        return v

    def model_post_init(self, __context) -> None:
        if self.coefficients.shape != self.grid.shape:
            raise ValueError(
                f"coefficient shape {self.coefficients.shape} does not match grid {self.grid.shape}"
            )

    # construction

    @classmethod
    def from_coefficients(
        cls, grid: Grid2D, coefficients: np.ndarray, is_real: bool = True, symmetrize: bool = True
    ) -> "SpectralField":
        c = np.asarray(coefficients, dtype=complex)
        if is_real and symmetrize:
            c = 0.5 * (c + np.conj(reflect(c)))
        return cls(grid=grid, coefficients=c, is_real=is_real)

    @classmethod
    def from_physical(cls, grid: Grid2D, values: np.ndarray, is_real: Optional[bool] = None) -> "SpectralField":
        values = np.asarray(values)
        if is_real is None:
            is_real = not np.iscomplexobj(values)
        if is_real:
            values = np.real(values)
        return cls.from_coefficients(grid, to_coefficients(values), is_real=is_real)

    @classmethod
    def zeros(cls, grid: Grid2D, is_real: bool = True) -> "SpectralField":
        return cls(grid=grid, coefficients=np.zeros(grid.shape, dtype=complex), is_real=is_real)

    def with_coefficients(self, coefficients: np.ndarray, is_real: Optional[bool] = None) -> "SpectralField":
        return SpectralField.from_coefficients(
            self.grid, coefficients, self.is_real if is_real is None else is_real
        )

    # views

    def physical(self) -> np.ndarray:
        return to_physical(self.coefficients, real=self.is_real)

    @property
    def mean(self) -> complex:
        return complex(self.coefficients[0, 0])

    def conj(self) -> "SpectralField":
        """Coefficients of the complex conjugate field."""
        return SpectralField(grid=self.grid, coefficients=np.conj(reflect(self.coefficients)), is_real=self.is_real)

    def real_part(self) -> "SpectralField":
        return SpectralField.from_coefficients(
            self.grid, 0.5 * (self.coefficients + self.conj().coefficients), is_real=True
        )

    def imag_part(self) -> "SpectralField":
        return SpectralField.from_coefficients(
            self.grid, -0.5j * (self.coefficients - self.conj().coefficients), is_real=True
        )

    # norms

    def l2_norm(self, exclude_mean: bool = False) -> float:
        c = self.coefficients
        total = float(np.sum(np.abs(c) ** 2))
        if exclude_mean:
            total -= float(abs(c[0, 0]) ** 2)
        return self.grid.box_length * float(np.sqrt(max(total, 0.0)))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.physical())))

    def hermitian_defect(self) -> float:
        c = self.coefficients
        scale = max(float(np.max(np.abs(c))), np.finfo(float).tiny)
        return float(np.max(np.abs(c - np.conj(reflect(c))))) / scale

    def inner(self, other: "SpectralField") -> complex:
        """Integral of conj(self) * other over the box."""
        return complex(self.grid.box_length ** 2 * np.vdot(self.coefficients, other.coefficients))

    # arithmetic

    def _check(self, other: "SpectralField") -> None:
        if not self.grid.same_as(other.grid):
            raise ValueError("fields live on different grids")

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self._check(other)
        return SpectralField(
            grid=self.grid,
            coefficients=self.coefficients + other.coefficients,
            is_real=self.is_real and other.is_real,
        )

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        self._check(other)
        return SpectralField(
            grid=self.grid,
            coefficients=self.coefficients - other.coefficients,
            is_real=self.is_real and other.is_real,
        )

    def __neg__(self) -> "SpectralField":
        return SpectralField(grid=self.grid, coefficients=-self.coefficients, is_real=self.is_real)

    def __mul__(self, scalar: Number) -> "SpectralField":
        if isinstance(scalar, SpectralField):
            raise TypeError("use spectral.dealias.product for field products")
        keeps_real = self.is_real and np.isreal(scalar)
        return SpectralField(grid=self.grid, coefficients=self.coefficients * scalar, is_real=bool(keeps_real))

    __rmul__ = __mul__
