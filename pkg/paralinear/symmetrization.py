"""Symbols of the paralinearized system and of its symmetrizer.

With g = grad h, P = 1 + |g|^2 and S = P - (g . xi/|xi|)^2 every principal
symbol is a closed form in (g, xi):

    lambda1  = |xi| S^(1/2)
    l2       = |xi|^2 P^(-3/2) S
    q        = P^(-1/2)
    p_half   = |xi|^(1/2) P^(-5/4) S^(1/4)
    Gamma    = sqrt(l2 lambda1) = |xi|^(3/2) (S / P)^(3/4)

They are expanded to ``amplitude_order`` in g. Sub-principal symbols
(lambda0, l1, the order-1/2 part of Gamma and p_minus_half) are built from
their defining formulas and kept to first order. gamma is Gamma + Gamma_sub
with the flat part |xi|^(3/2) removed, so it vanishes on a flat surface.
"""

from typing import Dict, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from evolution.state import SurfaceState
from paralinear.symbol import (
    XDependentSymbol,
    component,
    magnitude_power,
    unit_component,
)
from spectral.field import SpectralField
from spectral.multipliers import gradient
from utils.fitting import SlopeFit, loglog_slope
from utils.logging import get_logger


logger = get_logger("paralinear.symmetrization")

SUBPRINCIPAL_ORDER = 1


class SymmetrizationSymbols(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lambda1: XDependentSymbol
    lambda0: XDependentSymbol
    l2: XDependentSymbol
    l1: XDependentSymbol
    p_half: XDependentSymbol
    p_minus_half: XDependentSymbol
    q: XDependentSymbol
    gamma_principal: XDependentSymbol
    gamma_sub: XDependentSymbol
    gamma: XDependentSymbol
    beta: XDependentSymbol
    amplitude_order: int = Field(ge=1, le=3)
    n0: int

    @property
    def lambda_full(self) -> XDependentSymbol:
        return (self.lambda1 + self.lambda0).named("lambda", real=True)

    @property
    def l_full(self) -> XDependentSymbol:
        return (self.l2 + self.l1).named("l", real=True)

    @property
    def p_full(self) -> XDependentSymbol:
        return (self.p_half + self.p_minus_half).named("p", real=True)

    def as_dict(self) -> Dict[str, XDependentSymbol]:
        return {
            "lambda1": self.lambda1,
            "lambda0": self.lambda0,
            "l2": self.l2,
            "l1": self.l1,
            "p": self.p_full,
            "q": self.q,
            "gamma": self.gamma,
            "beta": self.beta,
        }


def _slope_symbols(h: SpectralField):
    grid = h.grid
    slopes = [XDependentSymbol.field(g, order=1, name=f"h_{axis}") for axis, g in zip("xy", gradient(h))]
    one = XDependentSymbol.multiplier(grid, name="1")
    return one, slopes


def _varying(a: XDependentSymbol) -> XDependentSymbol:
    """a without its constant-coefficient terms"""
    return a.model_copy(update={"terms": [t for t in a.terms if t.coefficient is not None]})


def symmetrization_symbols(
    state: SurfaceState, amplitude_order: int = 2, n0: int = 8
) -> SymmetrizationSymbols:
    """lambda, l, p, q, gamma and beta = Gamma^(2 n0 / 3) at the surface of ``state``."""
    h = state.h
    grid = h.grid
    k = amplitude_order
    j = SUBPRINCIPAL_ORDER
    one, slopes = _slope_symbols(h)

    slope2 = slopes[0].times(slopes[0], k) + slopes[1].times(slopes[1], k)
    along = slopes[0].with_multiplier(unit_component(0)) + slopes[1].with_multiplier(unit_component(1))
    big_p = one + slope2
    big_s = big_p - along.times(along, k)

    lambda1 = big_s.power(0.5, k).with_multiplier(magnitude_power(1.0)).named("lambda1")
    l2 = big_p.power(-1.5, k).times(big_s, k).with_multiplier(magnitude_power(2.0)).named("l2")
    q = big_p.power(-0.5, k).named("q")
    gamma_principal = (
        big_s.power(0.75, k).times(big_p.power(-0.75, k), k).with_multiplier(magnitude_power(1.5)).named("Gamma")
    )
    p_half = (
        big_p.power(-1.25, k).times(big_s.power(0.25, k), k).with_multiplier(magnitude_power(0.5)).named("p_half")
    )

    # lambda0 = P/(2 lambda1) (div(W grad h) + i grad_xi lambda1 . grad_x W), W = (lambda1 + i g.xi)/P
    tilt = slopes[0].with_multiplier(component(0)) + slopes[1].with_multiplier(component(1))
    w = (lambda1 + tilt.scaled(1j)).times(big_p.power(-1.0, j), j)
    flux = XDependentSymbol.zero(grid)
    transport = XDependentSymbol.zero(grid)
    for axis in (0, 1):
        flux = flux + w.times(slopes[axis], j).x_derivative(axis)
        transport = transport + lambda1.xi_derivative(axis).times(w.x_derivative(axis), j)
    prefactor = big_p.times(lambda1.power(-1.0, j), j).scaled(0.5)
    lambda0 = prefactor.times(flux + transport.scaled(1j), j).named("lambda0", real=True)

    l1 = l2.mixed_derivative(j).scaled(-0.5j).named("l1", real=True)

    root_ratio = big_p.power(-0.75, j).times(big_s.power(0.25, j), j).with_multiplier(magnitude_power(0.5))
    gamma_sub = (
        root_ratio.times(lambda0.real_part(), j).scaled(0.5) - gamma_principal.mixed_derivative(j).scaled(0.5j)
    ).named("Gamma_sub", real=True)
    gamma = (_varying(gamma_principal) + gamma_sub).named("gamma", real=True)

    bracket = (
        q.times(l1, j)
        - gamma_sub.times(p_half, j)
        + gamma_principal.poisson_pairing(p_half, j).scaled(1j)
    )
    p_minus_half = gamma_principal.power(-1.0, j).times(bracket, j).named("p_minus_half", real=True)

    beta = gamma_principal.power(2.0 * n0 / 3.0, k).named("beta", real=True)

    logger.debug(
        "Symmetrization symbols assembled",
        extra_data={
            "amplitude_order": k,
            "n0": n0,
            "terms": {s.name: len(s.terms) for s in (lambda1, lambda0, l2, l1, p_half, p_minus_half, q, gamma, beta)},
        },
    )
    return SymmetrizationSymbols(
        lambda1=lambda1,
        lambda0=lambda0,
        l2=l2,
        l1=l1,
        p_half=p_half,
        p_minus_half=p_minus_half,
        q=q,
        gamma_principal=gamma_principal,
        gamma_sub=gamma_sub,
        gamma=gamma,
        beta=beta,
        amplitude_order=k,
        n0=n0,
    )


# linear part of gamma

def _hessian_symbol(h: SpectralField, diagonal: float, name: str) -> XDependentSymbol:
    """|xi|^(1/2) sum_ab h_ab (diagonal delta_ab - xi_a xi_b / |xi|^2)"""
    grid = h.grid
    hx, hy = gradient(h)
    rows = (gradient(hx), gradient(hy))
    out = XDependentSymbol.zero(grid)
    for a in (0, 1):
        for b in (0, 1):
            ua, ub = unit_component(a), unit_component(b)
            delta = diagonal if a == b else 0.0

            def m(v, ua=ua, ub=ub, delta=delta):
                return magnitude_power(0.5)(v) * (delta - ua(v) * ub(v))

            out = out + XDependentSymbol.field(rows[a][b], order=1, m=m)
    return out.named(name)


def gamma_linear_expansion(h: SpectralField) -> XDependentSymbol:
    """(1/4) |xi|^(1/2) (Lap h - xi^.grad(grad h . xi^)), the part of gamma linear in h."""
    return _hessian_symbol(h, 1.0, "gamma_linear").scaled(0.25)


def gamma_closed_form(h: SpectralField) -> XDependentSymbol:
    """|xi|^(1/2) (Lap h / 2 - xi^.grad(grad h . xi^)), the linear form quoted next to gamma."""
    return _hessian_symbol(h, 0.5, "gamma_closed_form")


class GammaChecks(BaseModel):
    amplitudes: Sequence[float]
    linear_residual: Sequence[float]
    sup_gamma: Sequence[float]
    linear_fit: SlopeFit
    dominance_fit: SlopeFit
    flat_gamma_sup: float
    closed_form_deviation: float


def gamma_checks(
    h: SpectralField,
    amplitudes: Sequence[float],
    xis: Sequence[Sequence[float]] = ((1.0, 0.0), (1.0, 1.0), (0.0, 2.0), (3.0, -1.0)),
    amplitude_order: int = 2,
) -> GammaChecks:
    """Amplitude sweep of gamma(eps h) against eps times its linear expansion.

    ``h`` is the unit-amplitude profile. The residual sup over x and the
    sampled xi should scale like eps^2, sup|gamma| like eps. The relative
    gap between the expansion and the quoted closed form is reported.
    """
    linear = gamma_linear_expansion(h)
    closed = gamma_closed_form(h)
    zero_psi = SpectralField.zeros(h.grid)
    residuals, sups = [], []
    for eps in amplitudes:
        state = SurfaceState(h=h * eps, psi=zero_psi)
        gamma = symmetrization_symbols(state, amplitude_order=amplitude_order).gamma
        residuals.append(max(float(np.max(np.abs(gamma.evaluate(xi) - eps * linear.evaluate(xi)))) for xi in xis))
        sups.append(max(gamma.sup(xi) for xi in xis))

    flat = symmetrization_symbols(SurfaceState.zero(h.grid), amplitude_order=amplitude_order).gamma
    scale = max(linear.sup(xi) for xi in xis)
    deviation = max(float(np.max(np.abs(closed.evaluate(xi) - linear.evaluate(xi)))) for xi in xis)
    return GammaChecks(
        amplitudes=list(amplitudes),
        linear_residual=residuals,
        sup_gamma=sups,
        linear_fit=loglog_slope(amplitudes, residuals),
        dominance_fit=loglog_slope(amplitudes, sups),
        flat_gamma_sup=max(flat.sup(xi) for xi in xis),
        closed_form_deviation=deviation / scale if scale > 0 else 0.0,
    )
