"""The normal-form variable v = u + A(u, u) + B(u, u, u) [+ E(u, u, u, u)] and its profile.

A_{mu,nu}, B_{tau,kap,io} and E are the multilinear operators with the
symbols of ``normal_form.symbols``, applied on the dense lattice path.
"""

import itertools
from typing import Callable, Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from dispersion.propagation import linear_propagate
from evolution.bilinear import SymbolPath, apply_bilinear
from evolution.state import ComplexState
from normal_form.symbols import CubicSource, NormalFormSymbol, build_normal_form_symbol
from spectral.convolution import check_dense_size, dense_multilinear
from spectral.field import SpectralField
from utils.errors import ConfigurationError, DivergenceError
from utils.logging import get_logger


logger = get_logger("normal_form.good_variable")

PROFILE_TOLERANCE = 1e-10

SIGNS = (1, -1)


class ProfileState(BaseModel):
    """v and its profile g = e^{i t Lambda} v at one time."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    v: SpectralField
    g: SpectralField
    time: float = 0.0

    def model_post_init(self, __context) -> None:
        if not self.v.grid.same_as(self.g.grid):
            raise ValueError("v and its profile live on different grids")
        expected = linear_propagate(self.v, self.time, +1)
        scale = max(self.v.l2_norm(), np.finfo(float).tiny)
        gap = (expected - self.g).l2_norm() / scale
        if gap > PROFILE_TOLERANCE:
            raise ValueError(f"profile is not e^(i t Lambda) v at t={self.time:g} (relative gap {gap:.3e})")

    @classmethod
    def from_v(cls, v: SpectralField, time: float = 0.0) -> "ProfileState":
        return cls(v=v, g=profile(v, time), time=time)


def profile(v: SpectralField, t: float) -> SpectralField:
    return linear_propagate(v, t, +1)


def signatures(order: int) -> List[tuple]:
    return list(itertools.product(SIGNS, repeat=order))


def _symbols(
    order: int, cubic_source: Optional[CubicSource], quartic_source: Optional[Callable[..., np.ndarray]]
) -> List[NormalFormSymbol]:
    return [build_normal_form_symbol(order, s, cubic_source, quartic_source) for s in signatures(order)]


def check_depth(depth: int, grid, cubic_source, quartic_source, limits: Optional[dict] = None) -> None:
    """Refuse unsupported depths, missing sources and oversized grids before any work."""
    if depth not in (2, 3, 4):
        raise ConfigurationError(f"normal-form depth must be 2, 3 or 4, got {depth}", {"depth": depth})
    if depth >= 3 and cubic_source is None:
        raise ConfigurationError("depth 3 needs a cubic source", {"depth": depth})
    if depth >= 4 and quartic_source is None:
        raise ConfigurationError("depth 4 needs a quartic source; none is derived here", {"depth": depth})
    for order in range(2, depth + 1):
        check_dense_size(grid, order, limits)


def _apply(sym: NormalFormSymbol, u: ComplexState, limits: Optional[dict]) -> SpectralField:
    inputs = [u.signed(s) for s in sym.signs]
    if sym.order == 2:
        return apply_bilinear(sym.as_bilinear(), inputs[0], inputs[1], SymbolPath.DENSE, limits)
    c = dense_multilinear(u.grid, sym.weight, [f.coefficients for f in inputs], limits)
    return SpectralField(grid=u.grid, coefficients=c, is_real=False)


def correction_terms(
    u: ComplexState,
    depth: int = 2,
    cubic_source: Optional[CubicSource] = "bulk",
    quartic_source: Optional[Callable[..., np.ndarray]] = None,
    limits: Optional[dict] = None,
) -> Dict[int, SpectralField]:
    """Order -> sum over sign signatures of that order's correction."""
    check_depth(depth, u.grid, cubic_source, quartic_source, limits)
    out: Dict[int, SpectralField] = {}
    for order in range(2, depth + 1):
        total = SpectralField.zeros(u.grid, is_real=False)
        for sym in _symbols(order, cubic_source, quartic_source):
            total = total + _apply(sym, u, limits)
        out[order] = total
    return out


def corrections(
    u: ComplexState,
    depth: int = 2,
    cubic_source: Optional[CubicSource] = "bulk",
    quartic_source: Optional[Callable[..., np.ndarray]] = None,
    limits: Optional[dict] = None,
) -> SpectralField:
    terms = correction_terms(u, depth, cubic_source, quartic_source, limits)
    return sum(terms.values(), SpectralField.zeros(u.grid, is_real=False))


def good_variable(
    u: ComplexState,
    depth: int = 2,
    cubic_source: Optional[CubicSource] = "bulk",
    quartic_source: Optional[Callable[..., np.ndarray]] = None,
    limits: Optional[dict] = None,
) -> ProfileState:
    """v = u + corrections(u) with its profile at u.time."""
    v = u.u + corrections(u, depth, cubic_source, quartic_source, limits)
    return ProfileState.from_v(v, u.time)


def invert_good_variable(
    v: Union[SpectralField, ProfileState],
    depth: int = 2,
    cubic_source: Optional[CubicSource] = "bulk",
    quartic_source: Optional[Callable[..., np.ndarray]] = None,
    time: Optional[float] = None,
    tol: float = 1e-14,
    max_iter: int = 50,
    limits: Optional[dict] = None,
) -> ComplexState:
    """u from v by the fixed point u = v - corrections(u), started at u = v.

    Contracts while the corrections are small against u.
    """
    if isinstance(v, ProfileState):
        t = v.time if time is None else time
        v = v.v
    else:
        t = 0.0 if time is None else time
    check_depth(depth, v.grid, cubic_source, quartic_source, limits)

    u = v
    increments: List[float] = []
    for _ in range(max_iter):
        updated = v - corrections(ComplexState(u=u, time=t), depth, cubic_source, quartic_source, limits)
        scale = max(updated.l2_norm(), np.finfo(float).tiny)
        increment = (updated - u).l2_norm() / scale
        increments.append(increment)
        u = updated
        if not np.isfinite(increment):
            break
        if increment < tol:
            logger.debug(
                "Normal form inverted",
                extra_data={"depth": depth, "iterations": len(increments), "increment": increment},
            )
            return ComplexState(u=u, time=t)
    factors = [b / a for a, b in zip(increments, increments[1:]) if a > 0]
    raise DivergenceError(
        f"inverting the normal form did not converge in {len(increments)} iterations "
        f"(last increment {increments[-1]:.3e})",
        factors,
    )


def correction_sizes(u: ComplexState, depth: int = 2, **kwargs) -> Dict[str, float]:
    """||order-m correction||_2 / ||u||_2 per order."""
    scale = max(u.u.l2_norm(), np.finfo(float).tiny)
    return {f"order_{m}": t.l2_norm() / scale for m, t in correction_terms(u, depth, **kwargs).items()}
