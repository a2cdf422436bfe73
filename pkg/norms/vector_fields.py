"""The vector fields L = x.grad + 2 and Omega = x_perp.grad, and the Z2 norm.

Both act on the physical side with the box-centred coordinate, which is
only meaningful while the field sits well inside the box; the guard below
measures that. The Fourier-side forms

    F[L g]     = -xi . grad_xi g^
    F[Omega g] = xi_perp . grad_xi g^,   xi_perp = (-xi_2, xi_1)

are evaluated independently by central differences on the coefficient
lattice, for cross-checks.
"""

from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from spectral.field import SpectralField
from spectral.multipliers import gradient
from utils.logging import get_logger


logger = get_logger("norms.vector_fields")

LOCALIZATION_TOLERANCE = 1e-8

# sixth-order central difference weights for offsets 1, 2, 3
_STENCIL = (3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0)


class VectorField(str, Enum):
    L = "L"
    OMEGA = "Omega"


def localization_defect(f: SpectralField, reference: float = 0.0) -> float:
    """L^2 mass outside the central half-box |x|, |y| <= L/4, relative to the
    larger of the field's own mass and ``reference``.
    """
    grid = f.grid
    values = np.abs(f.physical()) ** 2
    total = max(float(np.sum(values)), reference / grid.dx ** 2)
    if total == 0.0:
        return 0.0
    quarter = grid.box_length / 4.0
    outside = (np.abs(grid.x) > quarter) | (np.abs(grid.y) > quarter)
    return float(np.sum(values[outside])) / total


def check_localization(f: SpectralField, label: str = "field", reference: float = 0.0) -> Optional[str]:
    defect = localization_defect(f, reference)
    if defect <= LOCALIZATION_TOLERANCE:
        return None
    message = (
        f"{label} leaves the central half-box (outside mass fraction {defect:.3e} > "
        f"{LOCALIZATION_TOLERANCE:g}); vector fields feel the periodic images"
    )
    logger.warning(message, extra_data={"label": label, "defect": defect})
    return message


def vector_field(g: SpectralField, which: VectorField | str) -> SpectralField:
    """L g = x.grad g + 2 g or Omega g = -y d_x g + x d_y g."""
    which = VectorField(which)
    grid = g.grid
    gx, gy = (d.physical() for d in gradient(g))
    if which == VectorField.L:
        values = grid.x * gx + grid.y * gy + 2.0 * g.physical()
    else:
        values = -grid.y * gx + grid.x * gy
    return SpectralField.from_physical(grid, values, is_real=g.is_real)


def _central_difference(c: np.ndarray, axis: int, spacing: float) -> np.ndarray:
    padded = np.pad(c, [(3, 3) if a == axis else (0, 0) for a in range(c.ndim)])
    n = c.shape[axis]
    out = np.zeros_like(c)
    for offset, w in enumerate(_STENCIL, start=1):
        ahead = np.take(padded, np.arange(3 + offset, 3 + offset + n), axis=axis)
        behind = np.take(padded, np.arange(3 - offset, 3 - offset + n), axis=axis)
        out += w * (ahead - behind)
    return out / spacing


def fourier_vector_field(g: SpectralField, which: VectorField | str) -> SpectralField:
    """The same operator applied to the coefficient lattice by finite differences in xi."""
    which = VectorField(which)
    grid = g.grid
    c = np.fft.fftshift(g.coefficients)
    kx = np.fft.fftshift(grid.kx)
    ky = np.fft.fftshift(grid.ky)
    dx = _central_difference(c, 0, grid.dk)
    dy = _central_difference(c, 1, grid.dk)
    if which == VectorField.L:
        out = -(kx * dx + ky * dy)
    else:
        out = kx * dy - ky * dx
    return SpectralField.from_coefficients(grid, np.fft.ifftshift(out), is_real=g.is_real)


class Z2Terms(BaseModel):
    parts: Dict[str, float]
    total: float
    warnings: List[str] = []
    path: str = "physical"


_PAIRS: Tuple[Tuple[VectorField, VectorField], ...] = tuple(
    (a, b) for a in VectorField for b in VectorField
)


def _label(*fields: VectorField) -> str:
    return "".join(f.value for f in fields)


def z2_terms(g: SpectralField, fourier_side: bool = False) -> Z2Terms:
    """||G1 G2 g|| over ordered pairs plus ||G1 g|| once per field."""
    apply = fourier_vector_field if fourier_side else vector_field
    warnings = []
    mass = g.l2_norm() ** 2
    if not fourier_side:
        message = check_localization(g, "profile")
        if message:
            warnings.append(message)

    parts: Dict[str, float] = {}
    first = {}
    for gamma in VectorField:
        first[gamma] = apply(g, gamma)
        parts[_label(gamma)] = first[gamma].l2_norm()
        if not fourier_side:
            message = check_localization(first[gamma], f"{gamma.value} profile", reference=mass)
            if message:
                warnings.append(message)
    for outer, inner in _PAIRS:
        parts[_label(outer, inner)] = apply(first[inner], outer).l2_norm()

    return Z2Terms(
        parts=parts,
        total=float(sum(parts.values())),
        warnings=warnings,
        path="fourier" if fourier_side else "physical",
    )


def z2_norm(g: SpectralField) -> float:
    return z2_terms(g).total
