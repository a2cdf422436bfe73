"""x-dependent symbols a(x, xi) = sum_j c_j(x) m_j(xi) and their paraproducts.

Each coefficient c_j is a real field carrying an amplitude order, the number
of surface-slope factors it was built from; the constant coefficient 1 is
stored as None with order 0. Multipliers are complex functions of the
wavevector. Products and powers truncate at a requested order, which is how
closed-form symbols in grad h are expanded into this sum.
"""

from typing import Callable, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from evolution.bilinear import VectorSymbol, lattice_vectors
from paralinear.paraproduct import paraproduct_coefficients
from spectral.dealias import physical_eval, zero_nyquist
from spectral.field import SpectralField
from spectral.grid import Grid2D
from spectral.multipliers import derivative_symbols
from utils.errors import NonFiniteMultiplierError


# central-difference step for xi-derivatives of multipliers
FD_STEP = 1e-5


# multipliers

def ones(v: np.ndarray) -> np.ndarray:
    return np.ones(np.shape(v)[:-1], dtype=complex)


def magnitude_power(s: float) -> VectorSymbol:
    """|xi|^s, set to 0 at xi = 0 unless s = 0."""
    if s == 0:
        return ones

    def m(v: np.ndarray) -> np.ndarray:
        r = np.linalg.norm(np.asarray(v, dtype=float), axis=-1)
        safe = np.where(r > 0, r, 1.0)
        return np.where(r > 0, safe ** s, 0.0).astype(complex)

    return m


def component(axis: int) -> VectorSymbol:
    """xi_axis"""

    def m(v: np.ndarray) -> np.ndarray:
        return np.asarray(v, dtype=float)[..., axis].astype(complex)

    return m


def unit_component(axis: int) -> VectorSymbol:
    """xi_axis / |xi|, 0 at xi = 0"""

    def m(v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        r = np.linalg.norm(v, axis=-1)
        return np.where(r > 0, v[..., axis] / np.where(r > 0, r, 1.0), 0.0).astype(complex)

    return m


def _product(m1: VectorSymbol, m2: VectorSymbol) -> VectorSymbol:
    if m1 is ones:
        return m2
    if m2 is ones:
        return m1
    return lambda v: m1(v) * m2(v)


def _scaled(m: VectorSymbol, value: complex) -> VectorSymbol:
    return lambda v: value * m(v)


def _quotient(m: VectorSymbol, d: VectorSymbol) -> VectorSymbol:
    """m / d, 0 where d vanishes"""

    def q(v: np.ndarray) -> np.ndarray:
        den = d(v)
        live = den != 0
        return np.where(live, m(v) / np.where(live, den, 1.0), 0.0)

    return q


def _power(m: VectorSymbol, s: float) -> VectorSymbol:
    """m^s on the principal branch, 0 where m vanishes"""

    def p(v: np.ndarray) -> np.ndarray:
        values = np.asarray(m(v), dtype=complex)
        live = values != 0
        return np.where(live, np.where(live, values, 1.0) ** s, 0.0)

    return p


def _sum(ms: List[VectorSymbol]) -> VectorSymbol:
    return lambda v: sum(m(v) for m in ms)


def _xi_derivative(m: VectorSymbol, axis: int) -> VectorSymbol:
    def d(v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        step = np.zeros(v.shape[-1])
        step[axis] = FD_STEP
        return (m(v + step) - m(v - step)) / (2.0 * FD_STEP)

    return d


def _real(m: VectorSymbol) -> VectorSymbol:
    return lambda v: np.real(m(v)).astype(complex)


# symbols

class SymbolTerm(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coefficient: Optional[SpectralField] = None
    multiplier: Callable = ones
    order: int = 0


def _multiply_fields(a: Optional[SpectralField], b: Optional[SpectralField]) -> Optional[SpectralField]:
    if a is None:
        return b
    if b is None:
        return a
    c = physical_eval(a.grid, np.multiply, a.coefficients, b.coefficients)
    return SpectralField.from_coefficients(a.grid, c, is_real=True)


class XDependentSymbol(BaseModel):
    """Finite sum of (coefficient field, multiplier) pairs on one grid.

    ``real`` marks symbols with conj(a(x, -xi)) = a(x, xi), whose paraproducts
    map real fields to real fields.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: Grid2D
    terms: List[SymbolTerm] = []
    name: str = "symbol"
    real: bool = True

    @classmethod
    def multiplier(cls, grid: Grid2D, m: VectorSymbol = ones, name: str = "multiplier") -> "XDependentSymbol":
        return cls(grid=grid, terms=[SymbolTerm(multiplier=m)], name=name)

    @classmethod
    def field(cls, f: SpectralField, order: int, m: VectorSymbol = ones, name: str = "field") -> "XDependentSymbol":
        return cls(grid=f.grid, terms=[SymbolTerm(coefficient=f, multiplier=m, order=order)], name=name)

    @classmethod
    def zero(cls, grid: Grid2D, name: str = "zero") -> "XDependentSymbol":
        return cls(grid=grid, terms=[], name=name)

    def named(self, name: str, real: Optional[bool] = None) -> "XDependentSymbol":
        update = {"name": name}
        if real is not None:
            update["real"] = real
        return self.model_copy(update=update)

    @property
    def max_order(self) -> int:
        return max((t.order for t in self.terms), default=0)

    def _check(self, other: "XDependentSymbol") -> None:
        if not self.grid.same_as(other.grid):
            raise ValueError("symbols live on different grids")

    # algebra

    def __add__(self, other: "XDependentSymbol") -> "XDependentSymbol":
        self._check(other)
        return XDependentSymbol(
            grid=self.grid, terms=self.terms + other.terms, name=self.name, real=self.real and other.real
        )

    def __neg__(self) -> "XDependentSymbol":
        return self.scaled(-1.0)

    def __sub__(self, other: "XDependentSymbol") -> "XDependentSymbol":
        return self + (-other)

    def scaled(self, value: complex) -> "XDependentSymbol":
        terms = [t.model_copy(update={"multiplier": _scaled(t.multiplier, value)}) for t in self.terms]
        return self.model_copy(update={"terms": terms, "real": self.real and bool(np.isreal(value))})

    def with_multiplier(self, m: VectorSymbol) -> "XDependentSymbol":
        terms = [t.model_copy(update={"multiplier": _product(t.multiplier, m)}) for t in self.terms]
        return self.model_copy(update={"terms": terms})

    def truncated(self, order: int) -> "XDependentSymbol":
        return self.model_copy(update={"terms": [t for t in self.terms if t.order <= order]})

    def times(self, other: "XDependentSymbol", max_order: int) -> "XDependentSymbol":
        self._check(other)
        terms = []
        for a in self.terms:
            for b in other.terms:
                if a.order + b.order > max_order:
                    continue
                terms.append(
                    SymbolTerm(
                        coefficient=_multiply_fields(a.coefficient, b.coefficient),
                        multiplier=_product(a.multiplier, b.multiplier),
                        order=a.order + b.order,
                    )
                )
        return XDependentSymbol(grid=self.grid, terms=terms, name=self.name, real=self.real and other.real)

    def constant_part(self) -> Optional[VectorSymbol]:
        """Sum of the multipliers with constant coefficient."""
        ms = [t.multiplier for t in self.terms if t.coefficient is None]
        if not ms:
            return None
        return ms[0] if len(ms) == 1 else _sum(ms)

    def power(self, exponent: float, max_order: int) -> "XDependentSymbol":
        """a^s by the binomial series about the constant-coefficient part a_0.

        The remaining terms must have order >= 1; a_0^s is taken where
        a_0 != 0 and the series is cut at ``max_order``.
        """
        base = self.constant_part()
        if base is None:
            raise ValueError(f"symbol {self.name!r} has no constant part to expand about")
        rest = [t for t in self.terms if t.coefficient is not None]
        if any(t.order < 1 for t in rest):
            raise ValueError("non-constant terms of order 0 cannot be expanded")
        ratio = XDependentSymbol(
            grid=self.grid,
            terms=[t.model_copy(update={"multiplier": _quotient(t.multiplier, base)}) for t in rest],
        )

        series = XDependentSymbol.multiplier(self.grid)
        power_k = XDependentSymbol.multiplier(self.grid)
        binomial = 1.0
        for k in range(1, max_order + 1):
            binomial *= (exponent - k + 1) / k
            power_k = power_k.times(ratio, max_order)
            if not power_k.terms:
                break
            series = series + power_k.scaled(binomial)
        return series.with_multiplier(_power(base, exponent)).named(self.name, real=self.real)

    def real_part(self) -> "XDependentSymbol":
        terms = [t.model_copy(update={"multiplier": _real(t.multiplier)}) for t in self.terms]
        return self.model_copy(update={"terms": terms})

    def x_derivative(self, axis: int) -> "XDependentSymbol":
        ik = derivative_symbols(self.grid)[axis]
        terms = [
            t.model_copy(
                update={"coefficient": SpectralField.from_coefficients(self.grid, ik * t.coefficient.coefficients)}
            )
            for t in self.terms
            if t.coefficient is not None
        ]
        return self.model_copy(update={"terms": terms})

    def xi_derivative(self, axis: int) -> "XDependentSymbol":
        terms = [t.model_copy(update={"multiplier": _xi_derivative(t.multiplier, axis)}) for t in self.terms]
        return self.model_copy(update={"terms": terms, "real": False})

    def mixed_derivative(self, max_order: int) -> "XDependentSymbol":
        """(grad_x . grad_xi) a, keeping terms up to ``max_order``."""
        low = self.truncated(max_order)
        out = XDependentSymbol.zero(self.grid)
        for axis in (0, 1):
            out = out + low.x_derivative(axis).xi_derivative(axis)
        return out.named(f"dxdxi({self.name})", real=False)

    def poisson_pairing(self, other: "XDependentSymbol", max_order: int) -> "XDependentSymbol":
        """grad_xi a . grad_x b"""
        out = XDependentSymbol.zero(self.grid)
        for axis in (0, 1):
            out = out + self.xi_derivative(axis).times(other.x_derivative(axis), max_order)
        return out.named(f"{{{self.name}, {other.name}}}", real=False)

    # evaluation

    def evaluate(self, xi) -> np.ndarray:
        """a(x, xi) on the physical grid for one wavevector xi."""
        v = np.asarray(xi, dtype=float).reshape(1, 2)
        out = np.zeros(self.grid.shape, dtype=complex)
        for t in self.terms:
            value = complex(np.asarray(t.multiplier(v))[0])
            if t.coefficient is None:
                out += value
            else:
                out += value * t.coefficient.physical()
        return out

    def sup(self, xi) -> float:
        return float(np.max(np.abs(self.evaluate(xi))))

    def _sample(self, m: VectorSymbol) -> np.ndarray:
        values = np.asarray(m(lattice_vectors(self.grid)), dtype=complex)
        bad = ~np.isfinite(values)
        if bad.any():
            index = tuple(int(i) for i in np.argwhere(bad)[0])
            raise NonFiniteMultiplierError(
                f"multiplier of {self.name!r} is not finite at {self.grid.lattice_offset(index)}",
                self.grid.lattice_offset(index),
            )
        return values

    def paraproduct(self, f: SpectralField) -> SpectralField:
        """sum_j T_{c_j} m_j(D) f; the constant coefficient acts as T_1."""
        if not self.grid.same_as(f.grid):
            raise ValueError("symbol and field live on different grids")
        out = np.zeros(self.grid.shape, dtype=complex)
        for t in self.terms:
            g = zero_nyquist(self._sample(t.multiplier) * f.coefficients)
            if t.coefficient is None:
                g[0, 0] = 0.0
                out += g
            else:
                out += paraproduct_coefficients(self.grid, t.coefficient.coefficients, g)
        return SpectralField.from_coefficients(self.grid, out, is_real=self.real and f.is_real)
