"""Scalar symbols attached to the Dirichlet-Neumann operator.

c(r) is the leading part of the quadratic symbol when the low input is much
smaller than the high one, d(r) the bulk cubic symbol written as a double
integral over the strip, e(r) the leading cubic symbol of the good variable,
and c_tilde(r) the factor in the scaling identity of quadratic phases.
"""

from typing import Literal

import numpy as np

from dispersion.laws import Lambda_tilde, c_tilde
from dno.strip import _rule_on


C_PLUS = -0.5j
C_MINUS = 0.5j

SymbolName = Literal["c", "d", "e", "c_tilde"]


def _sech2(r: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        return 1.0 / np.cosh(r) ** 2


def c_symbol(r) -> np.ndarray:
    """(c_+/2) Lambda_tilde(r) r^2 (1 - tanh^2 r)"""
    r = np.asarray(r, dtype=float)
    return 0.5 * C_PLUS * Lambda_tilde(r) * r ** 2 * _sech2(r)


def d_symbol(r, n_nodes: int = 32) -> np.ndarray:
    """Bulk cubic symbol by Gauss-Legendre quadrature on [-1, 0]^2.

    The inner s-integral is split at s = z where |z - s| has its kink.
    """
    r = np.atleast_1d(np.asarray(r, dtype=float))[:, None, None]
    damp = 1.0 + np.exp(-2.0 * r)

    def top_profile(z):
        # -sinh((z+1) r) / cosh r
        return -(np.exp(z * r) - np.exp(-(z + 2.0) * r)) / damp

    def bottom_profile(s):
        # sinh((s+1) r) / cosh r
        return (np.exp(s * r) - np.exp(-(s + 2.0) * r)) / damp

    def coupling(z, s):
        reflected = (
            np.exp((z + s - 2.0) * r)
            + np.exp((z - s - 2.0) * r)
            + np.exp((s - z - 2.0) * r)
            + np.exp(-(z + s + 2.0) * r)
        ) / damp
        return reflected - np.exp(-np.abs(z - s) * r) - np.exp((z + s) * r)

    z_nodes, z_weights = _rule_on(-1.0, 0.0, n_nodes)
    double = np.zeros(r.shape[0])
    for z, wz in zip(z_nodes, z_weights):
        inner = np.zeros(r.shape[0])
        for lo, hi in ((-1.0, z), (z, 0.0)):
            s, ws = _rule_on(lo, hi, n_nodes)
            s = s[None, None, :]
            integrand = top_profile(z) * bottom_profile(s) * coupling(z, s)
            inner += np.sum(integrand * ws, axis=(-2, -1))
        double += wz * inner
    double = 2.0 * double * r[:, 0, 0] ** 3

    s, ws = _rule_on(-1.0, 0.0, n_nodes)
    squared = np.sum(bottom_profile(s[None, None, :]) ** 2 * ws, axis=(-2, -1)) * r[:, 0, 0] ** 2
    rr = r[:, 0, 0]
    out = double - squared + np.tanh(rr) * rr
    return out


def e_symbol(r, n_nodes: int = 32) -> np.ndarray:
    """(c_+/4) d(r) - i c(r)^2 / Lambda(r).

    c^2/Lambda is evaluated as -(1/16) r^2 sech^4 r Lambda_tilde(r)^3, finite
    at r = 0.
    """
    r = np.asarray(r, dtype=float)
    ratio = -(1.0 / 16.0) * r ** 2 * _sech2(r) ** 2 * Lambda_tilde(r) ** 3
    d = d_symbol(r, n_nodes).reshape(r.shape)
    return 0.25 * C_PLUS * d - 1j * ratio


def special_symbols(which: SymbolName, r, n_nodes: int = 32) -> np.ndarray:
    if np.any(np.asarray(r) < 0):
        raise ValueError("symbols are evaluated at radii r >= 0")
    if which == "c":
        return c_symbol(r)
    if which == "d":
        return d_symbol(r, n_nodes).reshape(np.shape(r))
    if which == "e":
        return e_symbol(r, n_nodes)
    if which == "c_tilde":
        return c_tilde(r)
    raise ValueError(f"unknown symbol {which!r}")
