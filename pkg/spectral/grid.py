from functools import lru_cache
from typing import NamedTuple, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class _Lattice(NamedTuple):
    kx: np.ndarray
    ky: np.ndarray
    radius: np.ndarray
    x: np.ndarray
    y: np.ndarray
    nyquist_mask: np.ndarray


@lru_cache(maxsize=32)
def _lattice(n: int, box_length: float) -> _Lattice:
    # fftfreq ordering; d = L/(2 pi n) turns integer offsets into wavenumbers
    k1d = np.fft.fftfreq(n, d=box_length / (2.0 * np.pi * n))
    kx, ky = np.meshgrid(k1d, k1d, indexing="ij")
    # signed coordinates, x = 0 at index 0, |x| <= L/2 on each axis
    x1d = np.fft.fftfreq(n, d=1.0 / box_length)
    x, y = np.meshgrid(x1d, x1d, indexing="ij")
    nyq = np.zeros((n, n), dtype=bool)
    nyq[n // 2, :] = True
    nyq[:, n // 2] = True
    for arr in (kx, ky, x, y, nyq):
        arr.setflags(write=False)
    radius = np.hypot(kx, ky)
    radius.setflags(write=False)
    return _Lattice(kx, ky, radius, x, y, nyq)


class Grid2D(BaseModel):
    """Square periodic grid.

    Coefficients are stored in numpy FFT ordering and normalised so that
    ``f(x) = sum_k c_k exp(i k.x)``; the continuous transform is then
    ``box_length**2 * c``.
    """

    model_config = ConfigDict(frozen=True)

    n_points_per_axis: int = Field(gt=3, description="points per axis, a power of two")
    box_length: float = Field(gt=0, description="physical period per axis")

    @field_validator("n_points_per_axis")
    @classmethod
    def validate_power_of_two(cls, v: int) -> int:
        if v & (v - 1):
            raise ValueError(f"n_points_per_axis must be a power of two, got {v}")
        return v

    @classmethod
    def create(cls, n: int, box_length: float = 2.0 * np.pi) -> "Grid2D":
        return cls(n_points_per_axis=n, box_length=box_length)

    @property
    def n(self) -> int:
        return self.n_points_per_axis

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n, self.n)

    @property
    def dk(self) -> float:
        return 2.0 * np.pi / self.box_length

    @property
    def dx(self) -> float:
        return self.box_length / self.n

    @property
    def nyquist(self) -> float:
        return 0.5 * self.n * self.dk

    @property
    def kx(self) -> np.ndarray:
        return _lattice(self.n, self.box_length).kx

    @property
    def ky(self) -> np.ndarray:
        return _lattice(self.n, self.box_length).ky

    @property
    def radius(self) -> np.ndarray:
        return _lattice(self.n, self.box_length).radius

    @property
    def x(self) -> np.ndarray:
        return _lattice(self.n, self.box_length).x

    @property
    def y(self) -> np.ndarray:
        return _lattice(self.n, self.box_length).y

    @property
    def nyquist_mask(self) -> np.ndarray:
        return _lattice(self.n, self.box_length).nyquist_mask

    def physical_radius(self) -> np.ndarray:
        return np.hypot(self.x, self.y)

    def same_as(self, other: "Grid2D") -> bool:
        return self.n == other.n and self.box_length == other.box_length

    def lattice_offset(self, index: Tuple[int, int]) -> Tuple[int, int]:
        """Integer wavenumber offsets of a coefficient index."""
        i, j = index
        half = self.n // 2
        return (i - self.n if i >= half else i, j - self.n if j >= half else j)
